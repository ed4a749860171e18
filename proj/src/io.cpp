#include "goc/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "goc/datagen.hpp"
#include "goc/engine.hpp"
#include "goc/metrics.hpp"
#include "goc/uncertainty.hpp"

namespace goc {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::vector<std::string> splitCsvLine(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

double parseDouble(const std::string& s, const std::string& file, int lineno) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ParseError(file + ":" + std::to_string(lineno) + ": bad number '" + s + "'");
    }
}

int parseInt(const std::string& s, const std::string& file, int lineno) {
    try {
        std::size_t pos = 0;
        const int v = std::stoi(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw ParseError(file + ":" + std::to_string(lineno) + ": bad integer '" + s + "'");
    }
}

std::ofstream openOut(const std::filesystem::path& p) {
    std::ofstream out(p, std::ios::binary);  // LF line endings everywhere
    if (!out) throw Error("cannot open for writing: " + p.string());
    return out;
}

std::ifstream openIn(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw Error("cannot open for reading: " + p.string());
    return in;
}

}  // namespace

void save_dataset(const Dataset& d, const std::filesystem::path& dir,
                  std::optional<std::uint64_t> seed) {
    validate_dataset(d);
    std::filesystem::create_directories(dir);

    nlohmann::json meta;
    meta["n"] = d.size();
    meta["q"] = d.feature_dim;
    if (d.true_labels) {
        int k_star = 0;
        for (int l : *d.true_labels) k_star = std::max(k_star, l);
        meta["K_star"] = k_star;
    } else {
        meta["K_star"] = nullptr;
    }
    if (seed)
        meta["seed"] = *seed;
    else
        meta["seed"] = nullptr;
    meta["standardized"] = d.standardized;
    if (d.norm_meta) {
        nlohmann::json nm;
        nm["shift"] = std::vector<double>(d.norm_meta->shift.begin(), d.norm_meta->shift.end());
        nm["scale"] = std::vector<double>(d.norm_meta->scale.begin(), d.norm_meta->scale.end());
        nm["penalty_scale"] = d.norm_meta->penalty_scale;
        meta["norm_meta"] = nm;
    } else {
        meta["norm_meta"] = nullptr;
    }
    {
        auto out = openOut(dir / "meta.json");
        out << meta.dump(2) << "\n";
    }
    {
        auto out = openOut(dir / "candidates.csv");
        out << "individual,candidate";
        for (int l = 1; l <= d.feature_dim; ++l) out << ",f" << l;
        out << ",penalty\n";
        for (const auto& s : d.sets) {
            for (int j = 0; j < s.size(); ++j) {
                out << s.individual_id << "," << (j + 1);
                for (int l = 0; l < d.feature_dim; ++l) out << "," << fmt(s.candidates(j, l));
                out << "," << fmt(s.penalties(j)) << "\n";
            }
        }
    }
    if (d.true_labels) {
        auto out = openOut(dir / "truth.csv");
        out << "individual,true_cluster\n";
        for (std::size_t i = 0; i < d.true_labels->size(); ++i)
            out << d.sets[i].individual_id << "," << (*d.true_labels)[i] << "\n";
    }
}

Dataset load_dataset(const std::filesystem::path& dir) {
    nlohmann::json meta;
    {
        auto in = openIn(dir / "meta.json");
        try {
            in >> meta;
        } catch (const nlohmann::json::exception& e) {
            throw ParseError((dir / "meta.json").string() + ": " + e.what());
        }
    }
    Dataset d;
    d.feature_dim = meta.at("q").get<int>();
    const int n = meta.at("n").get<int>();
    d.standardized = meta.value("standardized", false);
    if (meta.contains("norm_meta") && !meta["norm_meta"].is_null()) {
        NormMeta nm;
        const auto shift = meta["norm_meta"].at("shift").get<std::vector<double>>();
        const auto scale = meta["norm_meta"].at("scale").get<std::vector<double>>();
        nm.shift = Eigen::Map<const Eigen::VectorXd>(shift.data(), shift.size());
        nm.scale = Eigen::Map<const Eigen::VectorXd>(scale.data(), scale.size());
        nm.penalty_scale = meta["norm_meta"].value("penalty_scale", 1.0);
        d.norm_meta = nm;
    }

    const std::string cand_file = (dir / "candidates.csv").string();
    auto in = openIn(dir / "candidates.csv");
    std::string line;
    int lineno = 1;
    if (!std::getline(in, line)) throw ParseError(cand_file + ":1: empty file");
    {
        std::string expected = "individual,candidate";
        for (int l = 1; l <= d.feature_dim; ++l) expected += ",f" + std::to_string(l);
        expected += ",penalty";
        if (line != expected)
            throw SchemaError(cand_file + ": header mismatch, expected '" + expected + "'");
    }
    // Rows are grouped by individual with candidate indices 1..m_i.
    std::vector<std::vector<Eigen::VectorXd>> rows;
    std::vector<std::vector<double>> pens;
    std::vector<int> ids;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto fields = splitCsvLine(line);
        if (static_cast<int>(fields.size()) != d.feature_dim + 3)
            throw SchemaError(cand_file + ":" + std::to_string(lineno) +
                              ": expected " + std::to_string(d.feature_dim + 3) + " columns");
        const int id = parseInt(fields[0], cand_file, lineno);
        const int cand = parseInt(fields[1], cand_file, lineno);
        if (ids.empty() || ids.back() != id) {
            ids.push_back(id);
            rows.emplace_back();
            pens.emplace_back();
        }
        if (cand != static_cast<int>(rows.back().size()) + 1)
            throw ParseError(cand_file + ":" + std::to_string(lineno) +
                             ": candidate indices must be 1-based and consecutive");
        Eigen::VectorXd x(d.feature_dim);
        for (int l = 0; l < d.feature_dim; ++l)
            x(l) = parseDouble(fields[2 + l], cand_file, lineno);
        rows.back().push_back(std::move(x));
        pens.back().push_back(parseDouble(fields[2 + d.feature_dim], cand_file, lineno));
    }
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EmpiricalFeatureSet s;
        s.individual_id = ids[i];
        s.candidates.resize(static_cast<Eigen::Index>(rows[i].size()), d.feature_dim);
        s.penalties.resize(static_cast<Eigen::Index>(rows[i].size()));
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            s.candidates.row(static_cast<Eigen::Index>(j)) = rows[i][j].transpose();
            s.penalties(static_cast<Eigen::Index>(j)) = pens[i][j];
        }
        d.sets.push_back(std::move(s));
    }
    if (d.size() != n)
        throw ParseError(cand_file + ": found " + std::to_string(d.size()) +
                         " individuals, meta.json says " + std::to_string(n));

    if (std::filesystem::exists(dir / "truth.csv")) {
        d.true_labels = load_labels(dir / "truth.csv");
        if (static_cast<int>(d.true_labels->size()) != n)
            throw ParseError((dir / "truth.csv").string() + ": wrong number of rows");
    }
    validate_dataset(d);
    return d;
}

void save_assignment(const Assignment& a, const std::filesystem::path& file) {
    auto out = openOut(file);
    if (a.selected) {
        out << "individual,label,selected\n";
        for (std::size_t i = 0; i < a.labels.size(); ++i)
            out << (i + 1) << "," << a.labels[i] << "," << (*a.selected)[i] << "\n";
    } else {
        out << "individual,label\n";
        for (std::size_t i = 0; i < a.labels.size(); ++i)
            out << (i + 1) << "," << a.labels[i] << "\n";
    }
}

Assignment load_assignment(const std::filesystem::path& file) {
    auto in = openIn(file);
    std::string line;
    if (!std::getline(in, line)) throw ParseError(file.string() + ":1: empty file");
    bool has_selected;
    if (line == "individual,label,selected")
        has_selected = true;
    else if (line == "individual,label")
        has_selected = false;
    else
        throw SchemaError(file.string() + ": header mismatch");
    Assignment a;
    if (has_selected) a.selected = std::vector<int>();
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto fields = splitCsvLine(line);
        if (fields.size() != (has_selected ? 3u : 2u))
            throw SchemaError(file.string() + ":" + std::to_string(lineno) + ": bad column count");
        a.labels.push_back(parseInt(fields[1], file.string(), lineno));
        if (has_selected) a.selected->push_back(parseInt(fields[2], file.string(), lineno));
    }
    for (int l : a.labels) a.num_clusters = std::max(a.num_clusters, l);
    return a;
}

std::vector<int> load_labels(const std::filesystem::path& file) {
    auto in = openIn(file);
    std::string line;
    if (!std::getline(in, line)) throw ParseError(file.string() + ":1: empty file");
    const auto header = splitCsvLine(line);
    if (header.size() < 2 || header[0] != "individual" ||
        (header[1] != "label" && header[1] != "true_cluster"))
        throw SchemaError(file.string() + ": expected 'individual,label' or 'individual,true_cluster'");
    std::vector<int> labels;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto fields = splitCsvLine(line);
        if (fields.size() < 2)
            throw SchemaError(file.string() + ":" + std::to_string(lineno) + ": bad column count");
        labels.push_back(parseInt(fields[1], file.string(), lineno));
    }
    return labels;
}

void save_trace(const GocTrace& trace, const std::filesystem::path& file) {
    auto out = openOut(file);
    out << "t,K,objective,n_changed_labels,n_changed_candidates\n";
    for (std::size_t r = 0; r < trace.iterations.size(); ++r) {
        const auto& it = trace.iterations[r];
        int changed_labels = static_cast<int>(it.labels.size());
        int changed_cands = static_cast<int>(it.selected.size());
        if (r > 0) {
            const auto& prev = trace.iterations[r - 1];
            changed_labels = 0;
            changed_cands = 0;
            for (std::size_t i = 0; i < it.labels.size(); ++i) {
                if (it.labels[i] != prev.labels[i]) ++changed_labels;
                if (it.selected[i] != prev.selected[i]) ++changed_cands;
            }
        }
        out << it.t << "," << it.K << "," << fmt(it.objective) << "," << changed_labels << ","
            << changed_cands << "\n";
    }
}

void save_similarity(const SimilarityMatrix& S, const std::filesystem::path& file) {
    auto out = openOut(file);
    const char* kind = S.kind == DiscrepancyKind::S1_mean_pairwise ? "s1"
                       : S.kind == DiscrepancyKind::S2_min_min     ? "s2"
                                                                   : "s3";
    out << "# kind=" << kind << "\n";
    for (Eigen::Index i = 0; i < S.values.rows(); ++i) {
        for (Eigen::Index j = 0; j < S.values.cols(); ++j) {
            if (j) out << ",";
            out << fmt(S.values(i, j));
        }
        out << "\n";
    }
}

SimilarityMatrix load_similarity(const std::filesystem::path& file) {
    auto in = openIn(file);
    std::string line;
    if (!std::getline(in, line) || line.rfind("# kind=", 0) != 0)
        throw SchemaError(file.string() + ": missing '# kind=' header");
    SimilarityMatrix S;
    const std::string kind = line.substr(7);
    if (kind == "s1")
        S.kind = DiscrepancyKind::S1_mean_pairwise;
    else if (kind == "s2")
        S.kind = DiscrepancyKind::S2_min_min;
    else if (kind == "s3")
        S.kind = DiscrepancyKind::S3_hausdorff;
    else
        throw SchemaError(file.string() + ": unknown kind '" + kind + "'");
    std::vector<std::vector<double>> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto fields = splitCsvLine(line);
        rows.emplace_back();
        for (const auto& f : fields) rows.back().push_back(parseDouble(f, file.string(), lineno));
    }
    const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
    S.values.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (static_cast<Eigen::Index>(rows[i].size()) != n)
            throw ParseError(file.string() + ": matrix is not square");
        for (Eigen::Index j = 0; j < n; ++j) S.values(i, j) = rows[i][j];
    }
    return S;
}

// ---------------------------------------------------------------------------
// Experiments
// ---------------------------------------------------------------------------

ExperimentConfig load_experiment_config(const std::filesystem::path& file) {
    nlohmann::json j;
    {
        auto in = openIn(file);
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(file.string() + ": " + e.what());
        }
    }
    ExperimentConfig cfg;
    const auto& ds = j.at("dataset");
    if (ds.contains("generate"))
        cfg.generate_seeds = ds["generate"].at("seeds").get<std::vector<std::uint64_t>>();
    else if (ds.contains("load"))
        cfg.load_dirs = ds["load"].get<std::vector<std::string>>();
    else
        throw SchemaError(file.string() + ": dataset must have 'generate' or 'load'");
    if (cfg.generate_seeds.size() > 1) {
        auto sorted = cfg.generate_seeds;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw SchemaError(file.string() + ": replicate seeds must be distinct");
    }
    for (const auto& m : j.at("methods")) {
        MethodSpec spec;
        spec.method = m.at("method").get<std::string>();
        if (spec.method != "goc" && spec.method != "gpc" && spec.method != "baseline" &&
            spec.method != "ap")
            throw SchemaError(file.string() + ": unknown method '" + spec.method + "'");
        spec.oracle = m.value("oracle", std::string("kmeans"));
        if (m.contains("k0")) spec.k0 = m["k0"].get<std::vector<int>>();
        if (m.contains("lambda")) spec.lambda = m["lambda"].get<std::vector<double>>();
        if (m.contains("kind")) spec.ap_kind = m["kind"].get<std::string>();
        if (m.contains("quantile")) spec.quantile = m["quantile"].get<std::vector<double>>();
        if (spec.k0.empty()) spec.k0 = {50};
        if (spec.lambda.empty()) spec.lambda = {0.0};
        if (spec.quantile.empty()) spec.quantile = {0.5};
        cfg.methods.push_back(std::move(spec));
    }
    if (cfg.methods.empty()) throw SchemaError(file.string() + ": empty method matrix");
    cfg.out_dir = j.value("out_dir", std::string("results"));
    return cfg;
}

namespace {

OracleKind parseOracle(const std::string& s) {
    if (s == "kmeans") return OracleKind::kmeans;
    if (s == "kmedoids") return OracleKind::kmedoids;
    if (s == "gmm") return OracleKind::gmm_eii;
    if (s == "gmm_bic") return OracleKind::gmm_eii_bic;
    throw SchemaError("unknown oracle '" + s + "'");
}

struct Cell {
    std::string method, oracle, ap_kind;
    int k0 = 0;
    double lambda = 0.0, quantile = 0.0;

    bool operator<(const Cell& o) const {
        return std::tie(method, oracle, k0, lambda, ap_kind, quantile) <
               std::tie(o.method, o.oracle, o.k0, o.lambda, o.ap_kind, o.quantile);
    }
};

struct CellResult {
    double nmi = std::nan(""), f = std::nan("");
    int n_clusters = 0, n_iterations = 0;
};

CellResult runCell(const Dataset& std_d, const Cell& cell) {
    CellResult r;
    Assignment a;
    if (cell.method == "goc" || cell.method == "gpc") {
        GocConfig gc;
        gc.K0 = cell.k0;
        gc.lambda = cell.lambda;
        gc.oracle.kind = parseOracle(cell.oracle);
        gc.T_max = 100;
        gc.mode = cell.method == "gpc" ? GocMode::pessimistic : GocMode::optimistic;
        auto [assign, trace] = run_goc(std_d, std::nullopt, gc);
        a = std::move(assign);
        r.n_iterations = trace.total_iterations;
    } else if (cell.method == "baseline") {
        OracleConfig oc;
        oc.kind = parseOracle(cell.oracle);
        a = baseline_cluster(std_d, cell.k0, oc);
        r.n_iterations = 1;
    } else {
        DiscrepancyKind kind = cell.ap_kind == "s1"   ? DiscrepancyKind::S1_mean_pairwise
                               : cell.ap_kind == "s2" ? DiscrepancyKind::S2_min_min
                                                      : DiscrepancyKind::S3_hausdorff;
        const SimilarityMatrix S = discrepancy_matrix(std_d, kind);
        const ApResult ap = affinity_propagation(S, cell.quantile);
        a = ap.assignment;
        r.n_iterations = ap.iterations;
    }
    r.n_clusters = a.num_clusters;
    if (std_d.true_labels) {
        r.nmi = nmi(a.labels, *std_d.true_labels);
        r.f = f_measure(a.labels, *std_d.true_labels);
    }
    return r;
}

}  // namespace

void run_experiment(const ExperimentConfig& cfg) {
    std::filesystem::create_directories(cfg.out_dir);

    std::vector<std::pair<std::string, Dataset>> datasets;
    for (std::uint64_t s : cfg.generate_seeds) {
        GenConfig gen;
        gen.seed = s;
        datasets.emplace_back("seed" + std::to_string(s), standardize(generate_dataset(gen)));
    }
    for (const auto& dir : cfg.load_dirs) {
        Dataset d = load_dataset(dir);
        datasets.emplace_back(dir, d.standardized ? d : standardize(d));
    }

    std::vector<Cell> cells;
    for (MethodSpec m : cfg.methods) {
        if (m.k0.empty()) m.k0 = {50};
        if (m.lambda.empty()) m.lambda = {0.0};
        if (m.quantile.empty()) m.quantile = {0.5};
        if (m.method == "ap") {
            for (double q : m.quantile) {
                Cell c;
                c.method = m.method;
                c.ap_kind = m.ap_kind;
                c.quantile = q;
                cells.push_back(c);
            }
        } else {
            for (int k0 : m.k0)
                for (double lam : m.lambda) {
                    Cell c;
                    c.method = m.method;
                    c.oracle = m.oracle;
                    c.k0 = k0;
                    c.lambda = m.method == "baseline" ? 0.0 : lam;
                    cells.push_back(c);
                    if (m.method == "baseline") break;  // lambda is meaningless
                }
        }
    }
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end(),
                            [](const Cell& a, const Cell& b) { return !(a < b) && !(b < a); }),
                cells.end());

    auto out = openOut(cfg.out_dir / "results.csv");
    out << "method,oracle,k0,lambda,ap_kind,quantile,dataset,stat,nmi,f_measure,n_clusters,"
           "n_iterations\n";
    for (const auto& cell : cells) {
        std::vector<CellResult> results;
        for (const auto& [name, d] : datasets) {
            const CellResult r = runCell(d, cell);
            results.push_back(r);
            out << cell.method << "," << cell.oracle << "," << cell.k0 << "," << fmt(cell.lambda)
                << "," << cell.ap_kind << "," << fmt(cell.quantile) << "," << name
                << ",replicate," << fmt(r.nmi) << "," << fmt(r.f) << "," << r.n_clusters << ","
                << r.n_iterations << "\n";
        }
        // Aggregate rows: mean and sample standard deviation.
        auto agg = [&](auto get) {
            double mean = 0.0;
            for (const auto& r : results) mean += get(r);
            mean /= static_cast<double>(results.size());
            double sd = 0.0;
            if (results.size() > 1) {
                for (const auto& r : results) sd += (get(r) - mean) * (get(r) - mean);
                sd = std::sqrt(sd / (static_cast<double>(results.size()) - 1.0));
            }
            return std::pair<double, double>(mean, sd);
        };
        const auto [nmi_m, nmi_s] = agg([](const CellResult& r) { return r.nmi; });
        const auto [f_m, f_s] = agg([](const CellResult& r) { return r.f; });
        const auto [k_m, k_s] = agg([](const CellResult& r) { return double(r.n_clusters); });
        const auto [it_m, it_s] = agg([](const CellResult& r) { return double(r.n_iterations); });
        out << cell.method << "," << cell.oracle << "," << cell.k0 << "," << fmt(cell.lambda)
            << "," << cell.ap_kind << "," << fmt(cell.quantile) << ",all,mean," << fmt(nmi_m)
            << "," << fmt(f_m) << "," << fmt(k_m) << "," << fmt(it_m) << "\n";
        out << cell.method << "," << cell.oracle << "," << cell.k0 << "," << fmt(cell.lambda)
            << "," << cell.ap_kind << "," << fmt(cell.quantile) << ",all,sd," << fmt(nmi_s) << ","
            << fmt(f_s) << "," << fmt(k_s) << "," << fmt(it_s) << "\n";
    }
}

}  // namespace goc
