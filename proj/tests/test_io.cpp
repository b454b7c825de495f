#include <doctest.h>

#include "shadowlab/io.hpp"
#include "shadowlab/protocols.hpp"

using namespace shadowlab;

TEST_CASE("flat config parsing") {
  const std::string text =
      "# experiment\n"
      "protocol = su2-tensor\n"
      "n = 4\n"
      "observable = \"zsym\"  # quoted\n"
      "snapshots = 10000\n"
      "\n"
      "seed = 7\n";
  const auto cfg = parse_flat_config(text);
  CHECK(cfg.at("protocol") == "su2-tensor");
  CHECK(cfg.at("n") == "4");
  CHECK(cfg.at("observable") == "zsym");
  CHECK(cfg.at("seed") == "7");
  CHECK_THROWS(parse_flat_config("not a key value line\n"));
}

TEST_CASE("sweep csv schema") {
  std::vector<SweepRow> rows;
  rows.push_back({"su2-tensor", "zsym", 4, 1000, 0.5, 2.25, 10.0, 9.0, 2.2, 0.1});
  rows.push_back({"local-clifford", "zpow", 4, 1000, 1.0, 80.0, 100.0, 90.0, std::nullopt, 0.2});
  const std::string csv = sweep_csv(rows);
  CHECK(csv.find("protocol,observable,n,N,mean,empirical_variance,bound_l2,bound_inf,exact,"
                 "runtime") == 0);
  CHECK(csv.find("su2-tensor,zsym,4,1000,0.5,2.25,10,9,2.2,0.1") != std::string::npos);
  // empty exact column stays empty
  CHECK(csv.find("local-clifford,zpow,4,1000,1,80,100,90,,0.2") != std::string::npos);
  // empty grid: header only
  CHECK(sweep_csv({}) ==
        "protocol,observable,n,N,mean,empirical_variance,bound_l2,bound_inf,exact,runtime\n");
}

TEST_CASE("sweep svg") {
  std::vector<SweepRow> rows;
  for (int n = 2; n <= 6; ++n)
    rows.push_back({"su2-tensor", "zsym", n, 1000, 0.0, std::pow(n, 1.7), 0, 0, std::nullopt, 0});
  const std::string svg = sweep_svg(rows, "variance vs n");
  CHECK(svg.find("<svg") == 0);
  CHECK(svg.find("polyline") != std::string::npos);
  CHECK(svg.find("su2-tensor / zsym") != std::string::npos);
}

TEST_CASE("published table rows") {
  // Cl(n) row at n=2: dim 4^2, 2 irreps, multiplicity-free
  const TableRow gc = table_row("global-clifford", {.n = 2, .d = 4, .spin = 0});
  CHECK(gc.dim_lv == 16);
  CHECK(gc.n_lambda == 2);
  CHECK(gc.mult_free);
  const TableRow lc = table_row("local-clifford", {.n = 2, .d = 0, .spin = 0});
  CHECK(lc.dim_lv == 16);
  CHECK(lc.n_lambda == 4);  // 2^n
  CHECK(lc.mult_free);
  // SP(d): d^2, 3 irreps, mult-free
  const TableRow sp = table_row("symplectic", {.n = 0, .d = 8, .spin = 0});
  CHECK(sp.dim_lv == 64);
  CHECK(sp.n_lambda == 3);
  CHECK(sp.mult_free);
  // S_n: n^2 - 2n + 2, 5 components, not mult-free
  const TableRow sn = table_row("sn-permutation", {.n = 5, .d = 0, .spin = 0});
  CHECK(sn.dim_lv == 17);
  CHECK(sn.n_lambda == 5);
  CHECK_FALSE(sn.mult_free);
  // SU(2) tensor: n+1 lambdas, not mult-free
  const TableRow su = table_row("su2-tensor", {.n = 4, .d = 0, .spin = 0});
  CHECK(su.n_lambda == 5);
  CHECK_FALSE(su.mult_free);
  // SU(2) spin S: (2S+1)^2, 2S+1, mult-free
  const TableRow ss = table_row("su2-spin", {.n = 0, .d = 0, .spin = 1.5});
  CHECK(ss.dim_lv == 16);
  CHECK(ss.n_lambda == 4);
  CHECK(ss.mult_free);
  // O(d) real form: d(d+1)/2 visible, 3 lambdas
  const TableRow od = table_row("orthogonal-real", {.n = 0, .d = 8, .spin = 0});
  CHECK(od.dim_lv == 36);
  CHECK(od.n_lambda == 3);
  // O(d) split form: d^2
  const TableRow os = table_row("orthogonal-split", {.n = 0, .d = 8, .spin = 0});
  CHECK(os.dim_lv == 64);
  CHECK(os.n_lambda == 3);
  // SO(2n) matchgates: 2^{2n-1}, n+1 lambdas, not mult-free
  const TableRow mg = table_row("matchgate", {.n = 3, .d = 0, .spin = 0});
  CHECK(mg.dim_lv == 32);
  CHECK(mg.n_lambda == 4);
  CHECK_FALSE(mg.mult_free);

  const std::string csv = table_csv(default_table());
  CHECK(csv.find("group,hilbert,subgroup,dim_LV,n_lambda,mult_free") == 0);
  CHECK(csv.find("S_n") != std::string::npos);
}

TEST_CASE("snapshot jsonl format") {
  std::vector<Snapshot> snaps;
  Snapshot s;
  s.descriptor.ensemble = "local-clifford";
  s.descriptor.params["indices"] = std::vector<int>{3, 17};
  s.outcome = 2;
  snaps.push_back(s);
  const std::string text = snapshots_to_jsonl("local-clifford", 42, snaps);
  CHECK(text.find("\"protocol\":\"local-clifford\"") != std::string::npos);
  CHECK(text.find("\"seed\":42") != std::string::npos);
  CHECK(text.find("\"outcome\":2") != std::string::npos);
  const auto back = snapshots_from_jsonl(text);
  REQUIRE(back.size() == 1);
  CHECK(back[0].outcome == 2);
  CHECK(back[0].descriptor.ensemble == "local-clifford");
}

TEST_CASE("format_double stability") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(1e-9) == "1e-09");
}
