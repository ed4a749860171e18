#include <doctest.h>

#include <fstream>

#include "goc/datagen.hpp"
#include "goc/engine.hpp"
#include "goc/io.hpp"
#include "goc/uncertainty.hpp"

using namespace goc;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("goc_io_test_" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

Dataset smallDataset(std::uint64_t seed) {
    GenConfig cfg;
    cfg.K_star = 5;
    cfg.m = 7;
    cfg.seed = seed;
    return generate_dataset(cfg);
}

}  // namespace

TEST_CASE("dataset save/load round trip is bit-exact") {
    TempDir tmp;
    const Dataset d = smallDataset(9);
    save_dataset(d, tmp.path / "d", 9);
    const Dataset back = load_dataset(tmp.path / "d");

    REQUIRE(back.size() == d.size());
    CHECK(back.feature_dim == d.feature_dim);
    for (int i = 0; i < d.size(); ++i) {
        CHECK(back.sets[i].individual_id == d.sets[i].individual_id);
        CHECK(back.sets[i].candidates == d.sets[i].candidates);
        CHECK(back.sets[i].penalties == d.sets[i].penalties);
    }
    REQUIRE(back.true_labels.has_value());
    CHECK(*back.true_labels == *d.true_labels);

    // Standardized datasets round trip too, including norm_meta.
    const Dataset std_d = standardize(d);
    save_dataset(std_d, tmp.path / "s");
    const Dataset std_back = load_dataset(tmp.path / "s");
    CHECK(std_back.standardized);
    REQUIRE(std_back.norm_meta.has_value());
    CHECK(std_back.norm_meta->shift == std_d.norm_meta->shift);
    CHECK(std_back.norm_meta->scale == std_d.norm_meta->scale);
    CHECK(std_back.norm_meta->penalty_scale == std_d.norm_meta->penalty_scale);
    for (int i = 0; i < d.size(); ++i)
        CHECK(std_back.sets[i].candidates == std_d.sets[i].candidates);
}

TEST_CASE("bad candidates.csv is rejected with a useful error") {
    TempDir tmp;
    const Dataset d = smallDataset(2);
    save_dataset(d, tmp.path / "d", 2);

    SUBCASE("header mismatch is a SchemaError") {
        std::ofstream out(tmp.path / "d" / "candidates.csv", std::ios::binary);
        out << "individual,f1,f2,f3,penalty\n";
        out.close();
        CHECK_THROWS_AS(load_dataset(tmp.path / "d"), SchemaError);
    }
    SUBCASE("non-numeric field is a ParseError naming the line") {
        std::ofstream out(tmp.path / "d" / "candidates.csv", std::ios::binary);
        out << "individual,candidate,f1,f2,f3,penalty\n";
        out << "1,1,0.5,oops,1.0,0\n";
        out.close();
        try {
            load_dataset(tmp.path / "d");
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(std::string(e.what()).find(":2") != std::string::npos);
        }
    }
}

TEST_CASE("truth.csv is optional") {
    TempDir tmp;
    Dataset d = smallDataset(3);
    d.true_labels.reset();
    save_dataset(d, tmp.path / "d");
    CHECK_FALSE(fs::exists(tmp.path / "d" / "truth.csv"));
    const Dataset back = load_dataset(tmp.path / "d");
    CHECK_FALSE(back.true_labels.has_value());
}

TEST_CASE("assignment round trip with and without selected indices") {
    TempDir tmp;
    Assignment a;
    a.labels = {2, 1, 2};
    a.num_clusters = 2;
    a.selected = std::vector<int>{3, 1, 2};
    save_assignment(a, tmp.path / "a.csv");
    const Assignment back = load_assignment(tmp.path / "a.csv");
    CHECK(back.labels == a.labels);
    CHECK(back.num_clusters == 2);
    REQUIRE(back.selected.has_value());
    CHECK(*back.selected == *a.selected);

    Assignment plain;
    plain.labels = {1, 1, 2};
    plain.num_clusters = 2;
    save_assignment(plain, tmp.path / "p.csv");
    const Assignment pb = load_assignment(tmp.path / "p.csv");
    CHECK(pb.labels == plain.labels);
    CHECK_FALSE(pb.selected.has_value());

    CHECK(load_labels(tmp.path / "a.csv") == a.labels);
}

TEST_CASE("trace export counts changes against the previous iteration") {
    TempDir tmp;
    GocTrace trace;
    Eigen::MatrixXd xi = Eigen::MatrixXd::Zero(3, 1);
    trace.iterations.push_back({1, 2, {1, 1, 2}, {1, 1, 1}, xi, 5.0});
    trace.iterations.push_back({2, 2, {1, 2, 2}, {1, 1, 2}, xi, 3.0});
    save_trace(trace, tmp.path / "t.csv");

    std::ifstream in(tmp.path / "t.csv");
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,K,objective,n_changed_labels,n_changed_candidates");
    std::getline(in, line);
    CHECK(line == "1,2,5,3,3");
    std::getline(in, line);
    CHECK(line == "2,2,3,1,1");
}

TEST_CASE("similarity matrices round trip with their kind") {
    TempDir tmp;
    SimilarityMatrix S;
    S.kind = DiscrepancyKind::S3_hausdorff;
    S.values.resize(2, 2);
    S.values << 0.0, -1.25, -1.25, 0.0;
    save_similarity(S, tmp.path / "s.csv");
    const SimilarityMatrix back = load_similarity(tmp.path / "s.csv");
    CHECK(back.kind == S.kind);
    CHECK(back.values == S.values);

    std::ofstream out(tmp.path / "bad.csv", std::ios::binary);
    out << "0,1\n1,0\n";
    out.close();
    CHECK_THROWS_AS(load_similarity(tmp.path / "bad.csv"), SchemaError);
}

TEST_CASE("experiment config parsing and validation") {
    TempDir tmp;
    {
        std::ofstream out(tmp.path / "cfg.json");
        out << R"({"dataset": {"generate": {"seeds": [1, 2]}},
                   "methods": [{"method": "goc", "oracle": "kmeans",
                                "k0": [10], "lambda": [0.0, 0.01]},
                               {"method": "ap", "kind": "s2", "quantile": [0.5]}],
                   "out_dir": "res"})";
    }
    const ExperimentConfig cfg = load_experiment_config(tmp.path / "cfg.json");
    CHECK(cfg.generate_seeds == std::vector<std::uint64_t>{1, 2});
    REQUIRE(cfg.methods.size() == 2);
    CHECK(cfg.methods[0].lambda == std::vector<double>{0.0, 0.01});
    CHECK(cfg.methods[1].ap_kind == "s2");
    CHECK(cfg.out_dir == fs::path("res"));

    {
        std::ofstream out(tmp.path / "dup.json");
        out << R"({"dataset": {"generate": {"seeds": [1, 1]}},
                   "methods": [{"method": "goc"}]})";
    }
    CHECK_THROWS_AS(load_experiment_config(tmp.path / "dup.json"), SchemaError);

    {
        std::ofstream out(tmp.path / "bad.json");
        out << R"({"dataset": {"load": ["x"]},
                   "methods": [{"method": "quantum"}]})";
    }
    CHECK_THROWS_AS(load_experiment_config(tmp.path / "bad.json"), SchemaError);
}

TEST_CASE("a small experiment writes per-replicate and aggregate rows") {
    TempDir tmp;
    // Two small saved datasets as replicates (generated seeds would use the
    // full default recipe and be slow here).
    save_dataset(smallDataset(1), tmp.path / "d1", 1);
    save_dataset(smallDataset(2), tmp.path / "d2", 2);

    ExperimentConfig cfg;
    cfg.load_dirs = {(tmp.path / "d1").string(), (tmp.path / "d2").string()};
    MethodSpec goc_spec;
    goc_spec.method = "goc";
    goc_spec.k0 = {5};
    goc_spec.lambda = {0.01};
    MethodSpec base_spec;
    base_spec.method = "baseline";
    base_spec.k0 = {5};
    cfg.methods = {goc_spec, base_spec};
    cfg.out_dir = tmp.path / "res";
    run_experiment(cfg);

    std::ifstream in(cfg.out_dir / "results.csv");
    REQUIRE(in.good());
    std::string line;
    std::getline(in, line);
    CHECK(line ==
          "method,oracle,k0,lambda,ap_kind,quantile,dataset,stat,nmi,f_measure,n_clusters,"
          "n_iterations");
    int replicates = 0, means = 0, sds = 0;
    while (std::getline(in, line)) {
        if (line.find(",replicate,") != std::string::npos) ++replicates;
        if (line.find(",mean,") != std::string::npos) ++means;
        if (line.find(",sd,") != std::string::npos) ++sds;
    }
    CHECK(replicates == 4);  // 2 cells x 2 datasets
    CHECK(means == 2);
    CHECK(sds == 2);
}
