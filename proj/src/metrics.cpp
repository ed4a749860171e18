#include "goc/metrics.hpp"

#include <cmath>

namespace goc {

Contingency contingency(const std::vector<int>& pred, const std::vector<int>& truth) {
    if (pred.size() != truth.size())
        throw LengthMismatch("contingency: label vectors have different lengths");
    if (pred.empty()) throw LengthMismatch("contingency: empty label vectors");
    int K = 0, Ks = 0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (pred[i] < 1 || truth[i] < 1) throw BadLabel("contingency: labels are 1-based");
        K = std::max(K, pred[i]);
        Ks = std::max(Ks, truth[i]);
    }
    Contingency c;
    c.n = static_cast<int>(pred.size());
    c.n_kl = Eigen::MatrixXi::Zero(K, Ks);
    for (std::size_t i = 0; i < pred.size(); ++i) c.n_kl(pred[i] - 1, truth[i] - 1) += 1;
    c.n_k_dot = c.n_kl.rowwise().sum();
    c.n_dot_l = c.n_kl.colwise().sum().transpose();
    return c;
}

double nmi(const std::vector<int>& pred, const std::vector<int>& truth) {
    const Contingency c = contingency(pred, truth);
    const double n = c.n;
    double info = 0.0, h1 = 0.0, h2 = 0.0;
    for (Eigen::Index k = 0; k < c.n_kl.rows(); ++k)
        for (Eigen::Index l = 0; l < c.n_kl.cols(); ++l)
            if (c.n_kl(k, l) > 0)
                info += c.n_kl(k, l) / n *
                        std::log(n * c.n_kl(k, l) /
                                 (static_cast<double>(c.n_k_dot(k)) * c.n_dot_l(l)));
    // log(n / n_k) rather than -log(n_k / n): for identical partitions the
    // entropy terms then match the mutual-information terms bitwise, so the
    // ratio is exactly 1.
    for (Eigen::Index k = 0; k < c.n_k_dot.size(); ++k)
        if (c.n_k_dot(k) > 0) h1 += c.n_k_dot(k) / n * std::log(n / c.n_k_dot(k));
    for (Eigen::Index l = 0; l < c.n_dot_l.size(); ++l)
        if (c.n_dot_l(l) > 0) h2 += c.n_dot_l(l) / n * std::log(n / c.n_dot_l(l));
    if (info <= 0.0) return 0.0;
    return 2.0 * info / (h1 + h2);
}

double f_measure(const std::vector<int>& pred, const std::vector<int>& truth) {
    const Contingency c = contingency(pred, truth);
    const double n = c.n;
    // Accumulate n_.l-weighted terms and divide by n once, so a perfect match
    // sums the integer column counts to n and returns exactly 1.
    double f = 0.0;
    for (Eigen::Index l = 0; l < c.n_kl.cols(); ++l) {
        double best = 0.0;
        for (Eigen::Index k = 0; k < c.n_kl.rows(); ++k) {
            if (c.n_kl(k, l) == 0) continue;
            const double nkl = c.n_kl(k, l);
            const double inv = nkl / c.n_k_dot(k) + nkl / c.n_dot_l(l);
            best = std::max(best, 2.0 * nkl * nkl /
                                      (static_cast<double>(c.n_k_dot(k)) * c.n_dot_l(l)) / inv);
        }
        f += c.n_dot_l(l) * best;
    }
    return f / n;
}

EtaScores eta_scores(const GocTrace& trace, const Assignment& final,
                     const Eigen::MatrixXd& final_candidates,
                     const std::optional<std::vector<int>>& truth) {
    if (trace.iterations.empty()) throw Error("eta_scores: empty trace");
    EtaScores out;
    const double n = static_cast<double>(final.labels.size());
    double nmi_final_truth = 0.0;
    if (truth) nmi_final_truth = nmi(final.labels, *truth);
    const bool have_eta3 = truth && nmi_final_truth > 0.0;
    if (have_eta3) out.eta3 = std::vector<double>();
    for (const auto& it : trace.iterations) {
        out.eta1.push_back(nmi(it.labels, final.labels));
        out.eta2.push_back((it.candidates - final_candidates).rowwise().squaredNorm().sum() / n);
        if (have_eta3) out.eta3->push_back(nmi(it.labels, *truth) / nmi_final_truth);
    }
    return out;
}

}  // namespace goc
