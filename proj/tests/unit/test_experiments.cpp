#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <set>

#include "pqfreq/experiments.hpp"

using namespace pqfreq;

TEST_CASE("counter RNG is reproducible and stream-separated") {
  CounterRng a(42, 0), b(42, 0), c(42, 1);
  std::vector<std::uint64_t> va, vc;
  for (int i = 0; i < 100; ++i) {
    std::uint64_t x = a.next();
    CHECK(x == b.next());
    va.push_back(x);
    vc.push_back(c.next());
  }
  CHECK(va != vc);
  CounterRng u(1, 2);
  for (int i = 0; i < 1000; ++i) {
    double v = u.uniform();
    CHECK(v >= 0.0);
    CHECK(v < 1.0);
    int k = u.integer(3, 5);
    CHECK(k >= 3);
    CHECK(k <= 5);
  }
}

TEST_CASE("seeded domain specs depend only on the seed") {
  auto a = seeded_domain_specs(20240611, 20);
  auto b = seeded_domain_specs(20240611, 20);
  auto c = seeded_domain_specs(7, 20);
  CHECK(a.size() == 20);
  CHECK(a == b);
  CHECK(a != c);
  for (const auto& s : a) CHECK_NOTHROW(DomainSpec::parse(s, 1.0 / 16).validate());
  auto prefix = seeded_domain_specs(20240611, 5);
  CHECK(std::equal(prefix.begin(), prefix.end(), a.begin()));
}

TEST_CASE("thread pool visits every index once and rethrows") {
  std::vector<int> hits(257, 0);
  run_pool(hits.size(), [&](std::size_t i) { hits[i] += 1; }, 3);
  CHECK(std::all_of(hits.begin(), hits.end(), [](int v) { return v == 1; }));
  CHECK_THROWS_AS(run_pool(10, [](std::size_t i) { if (i == 4) throw ValidationError("x"); }, 2),
                  ValidationError);
}

TEST_CASE("campaign JSON parsing") {
  Campaign c = Campaign::from_json(R"({"name":"t","seed":5,"h":0.0625,"domains":["disk:r=1"],
    "exponents":[[2,2],[4,"inf"]],"solver":{"tol":1e-9,"backend":"cg"}})");
  CHECK(c.name == "t");
  CHECK(c.seed == 5);
  CHECK(c.h == 0.0625);
  REQUIRE(c.exponents.size() == 2);
  CHECK(c.exponents[1].second == kInf);
  CHECK(c.solve.backend == LinearBackend::cg);
  Campaign back = Campaign::from_json(c.to_json());
  CHECK(back.to_json() == c.to_json());

  CHECK_THROWS_AS(Campaign::from_json(R"({"sed": 1})"), ValidationError);
  CHECK_THROWS_AS(Campaign::from_json(R"({"kind": "nope"})"), ValidationError);
  CHECK_THROWS_AS(Campaign::from_json(R"({"h": -1})"), ValidationError);
  CHECK_THROWS_AS(Campaign::from_json(R"({"exponents": [[2, "x"]]})"), ValidationError);
  CHECK_THROWS_AS(Campaign::from_json("{"), ValidationError);
  CHECK_THROWS_AS(Campaign::from_json("[1]"), ValidationError);
}

TEST_CASE("shipped campaign files parse") {
  for (const auto& entry : std::filesystem::directory_iterator(PQFREQ_CAMPAIGN_DIR))
    if (entry.path().extension() == ".json") {
      CAPTURE(entry.path().string());
      CHECK_NOTHROW(Campaign::load(entry.path().string()));
    }
}

TEST_CASE("number formatting") {
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(0.1 + 0.2) == "0.3");
  CHECK(format_number(kInf) == "inf");
  CHECK(format_number(-kInf) == "-inf");
}

TEST_CASE("empty row set gives a header-only CSV") {
  std::string csv = rows_csv({});
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1);
  Summary s = summarize({});
  CHECK(s.pass_count == 0);
  CHECK(s.fail_count == 0);
}

TEST_CASE("summary counts and row ordering") {
  std::vector<BoundRow> rows;
  rows.push_back(lower_bound_row("b", 2.0, 1.0, 1e-3));
  rows.push_back(lower_bound_row("a", 1.0, 2.0, 1e-3));
  rows.push_back(upper_bound_row("c", 1.0, 2.0, 1e-3));
  Summary s = summarize(rows);
  CHECK(s.pass_count == 2);
  CHECK(s.fail_count == 1);
  CHECK(s.worst_margin == doctest::Approx(-0.5));
  std::vector<BoundRow> rev(rows.rbegin(), rows.rend());
  CHECK(rows_csv(rows) == rows_csv(rev));
}

TEST_CASE("verify campaign is deterministic") {
  Campaign c;
  c.seed = 99;
  c.h = 1.0 / 16;
  c.domains = {"disk:r=1"};
  c.seeded_domains = 2;
  c.exponents = {{2.0, 2.0}, {4.0, kInf}};
  VerifyResult a = verify_inequalities(c);
  VerifyResult b = verify_inequalities(c);
  CHECK(!a.rows.empty());
  CHECK(rows_csv(a.rows) == rows_csv(b.rows));
  CHECK(a.summary.fail_count == 0);
  std::set<std::string> labels;
  for (const auto& r : a.rows) labels.insert(r.label);
  CHECK(labels.size() > 3);
}

TEST_CASE("sweep table CSV") {
  SweepTable t;
  t.columns = {"a", "b"};
  t.rows = {{1.0, 2.5}, {3.0, kInf}};
  CHECK(sweep_csv(t) == "a,b\n1,2.5\n3,inf\n");
}
