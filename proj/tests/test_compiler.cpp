#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "qmuse/compiler.hpp"
#include "qmuse/solvers.hpp"

using namespace qmuse;

namespace {

Constraint make_constraint(std::string name, LinearExpr lhs, Relation rel,
                           double rhs) {
  Constraint c;
  c.name = std::move(name);
  c.lhs = std::move(lhs);
  c.relation = rel;
  c.rhs = rhs;
  return c;
}

std::map<std::string, IntVar> bounds_of(const IlpModel& m) {
  std::map<std::string, IntVar> bounds;
  for (const auto& v : m.variables) bounds[v.name] = v;
  return bounds;
}

Assignment bits_of(std::uint32_t mask, std::size_t n) {
  Assignment x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = (mask >> i) & 1;
  return x;
}

}  // namespace

// ---------------------------------------------------------------------------
// to_equality
// ---------------------------------------------------------------------------

TEST_CASE("to_equality on binary variables") {
  IlpModel m;
  m.add_variable("x1", 0, 1);
  m.add_variable("x2", 0, 1);
  LinearExpr lhs;
  lhs.add("x1", 1).add("x2", 1);
  EqualityForm eq = to_equality(
      make_constraint("c", lhs, Relation::less_equal, 1), bounds_of(m));
  CHECK(eq.slack.lower == 0);
  CHECK(eq.slack.upper == 1);
  CHECK(eq.equality.relation == Relation::equal);
  CHECK(eq.equality.lhs.coefficient(eq.slack.name) == 1.0);
}

TEST_CASE("to_equality slack bound uses interval arithmetic") {
  IlpModel m;
  m.add_variable("y1", 0, 2);
  m.add_variable("y2", 0, 2);
  LinearExpr lhs;
  lhs.add("y1", 2).add("y2", 3);
  EqualityForm eq = to_equality(
      make_constraint("c", lhs, Relation::less_equal, 7), bounds_of(m));
  CHECK(eq.slack.upper == 7);  // min(lhs) = 0
}

TEST_CASE("to_equality with a negative coefficient") {
  IlpModel m;
  m.add_variable("y1", 0, 3);
  LinearExpr lhs;
  lhs.add("y1", -1);
  EqualityForm eq = to_equality(
      make_constraint("c", lhs, Relation::less_equal, 2), bounds_of(m));
  CHECK(eq.slack.upper == 5);  // min(lhs) = -3
}

TEST_CASE("to_equality detects infeasible constraints") {
  IlpModel m;
  m.add_variable("y", 2, 5);
  LinearExpr lhs;
  lhs.add("y", 1);
  CHECK_THROWS_AS(to_equality(make_constraint("c", lhs, Relation::less_equal, 1),
                              bounds_of(m)),
                  Error);
  CHECK_THROWS_AS(
      to_equality(make_constraint("c", lhs, Relation::greater_equal, 9),
                  bounds_of(m)),
      Error);
}

TEST_CASE("to_equality rejects effectively unbounded slack ranges") {
  IlpModel m;
  m.add_variable("y", 0, std::int64_t(1) << 40);
  LinearExpr lhs;
  lhs.add("y", 1);
  CHECK_THROWS_AS(
      to_equality(make_constraint("c", lhs, Relation::greater_equal, 0),
                  bounds_of(m)),
      Error);
}

// ---------------------------------------------------------------------------
// binarize
// ---------------------------------------------------------------------------

TEST_CASE("binarize basics") {
  BinaryEncoding one_bit = binarize({"y", 0, 1});
  CHECK(one_bit.bits.size() == 1);
  CHECK(one_bit.bits[0].second == 1);
  CHECK(one_bit.offset == 0);

  BinaryEncoding fixed = binarize({"y", 3, 3});
  CHECK(fixed.bits.empty());
  CHECK(fixed.offset == 3);
}

TEST_CASE("binarize of [0,5] uses coefficients 1,2,2") {
  BinaryEncoding enc = binarize({"y", 0, 5});
  REQUIRE(enc.bits.size() == 3);
  CHECK(enc.bits[0].second == 1);
  CHECK(enc.bits[1].second == 2);
  CHECK(enc.bits[2].second == 2);

  std::multiset<std::int64_t> decoded;
  for (std::uint32_t mask = 0; mask < 8; ++mask) {
    Assignment x = bits_of(mask, 3);
    decoded.insert(enc.decode(x));
  }
  CHECK(decoded == std::multiset<std::int64_t>{0, 1, 2, 2, 3, 3, 4, 5});
}

TEST_CASE("binarize is surjective onto the range") {
  for (std::int64_t lower : {-7, -1, 0, 3}) {
    for (std::int64_t range = 0; range <= 17; ++range) {
      BinaryEncoding enc = binarize({"y", lower, lower + range});
      std::set<std::int64_t> image;
      std::size_t k = enc.bits.size();
      for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
        Assignment x = bits_of(mask, k);
        std::int64_t v = enc.decode(x);
        CHECK(v >= lower);
        CHECK(v <= lower + range);
        image.insert(v);
      }
      CHECK(image.size() == static_cast<std::size_t>(range + 1));
    }
  }
}

TEST_CASE("encoding encode/decode round trip") {
  BinaryEncoding enc = binarize({"y", -3, 12});
  for (std::int64_t v = -3; v <= 12; ++v) {
    Assignment x(enc.bits.size(), 0);
    enc.encode(v, x);
    CHECK(enc.decode(x) == v);
  }
}

// ---------------------------------------------------------------------------
// penalty_pattern / squared_penalty
// ---------------------------------------------------------------------------

namespace {

BinaryTermConstraint view2(double c1, double c2, Relation rel, double rhs) {
  BinaryTermConstraint c;
  c.terms = {{0, c1}, {1, c2}};
  c.relation = rel;
  c.rhs = rhs;
  return c;
}

}  // namespace

TEST_CASE("penalty table rows") {
  double p = 3.0;

  auto at_most_one = penalty_pattern(view2(1, 1, Relation::less_equal, 1), p);
  REQUIRE(at_most_one);
  PolyExpr expect;
  expect.add_term({0, 1}, p);
  CHECK(*at_most_one == expect);

  auto exactly_one = penalty_pattern(view2(1, 1, Relation::equal, 1), p);
  REQUIRE(exactly_one);
  PolyExpr row3;
  row3.add_term({}, p).add_term({0}, -p).add_term({1}, -p).add_term({0, 1},
                                                                    2 * p);
  CHECK(*exactly_one == row3);

  auto equal_vars = penalty_pattern(view2(1, -1, Relation::equal, 0), p);
  REQUIRE(equal_vars);
  PolyExpr row6;
  row6.add_term({0}, p).add_term({1}, p).add_term({0, 1}, -2 * p);
  CHECK(*equal_vars == row6);

  BinaryTermConstraint three;
  three.terms = {{0, 1.0}, {1, 1.0}, {2, 1.0}};
  three.relation = Relation::less_equal;
  three.rhs = 1;
  auto pick_one = penalty_pattern(three, p);
  REQUIRE(pick_one);
  PolyExpr row5;
  row5.add_term({0, 1}, p).add_term({1, 2}, p).add_term({0, 2}, p);
  CHECK(*pick_one == row5);
}

TEST_CASE("penalty table truth tables") {
  // Each matched penalty is zero exactly on the satisfying assignments and
  // at least the penalty weight on the violating ones.
  struct Row {
    BinaryTermConstraint c;
    std::size_t width;
  };
  BinaryTermConstraint three;
  three.terms = {{0, 1.0}, {1, 1.0}, {2, 1.0}};
  three.relation = Relation::less_equal;
  three.rhs = 1;
  std::vector<Row> rows = {
      {view2(1, 1, Relation::less_equal, 1), 2},
      {view2(1, 1, Relation::greater_equal, 1), 2},
      {view2(1, 1, Relation::equal, 1), 2},
      {view2(1, -1, Relation::less_equal, 0), 2},
      {three, 3},
      {view2(1, -1, Relation::equal, 0), 2},
  };
  for (const auto& row : rows) {
    auto penalty = penalty_pattern(row.c, 2.5);
    REQUIRE(penalty);
    for (std::uint32_t mask = 0; mask < (1u << row.width); ++mask) {
      Assignment x = bits_of(mask, row.width);
      double lhs = 0;
      for (const auto& [v, coeff] : row.c.terms) lhs += coeff * x[v];
      bool satisfied = row.c.relation == Relation::less_equal
                           ? lhs <= row.c.rhs
                           : (row.c.relation == Relation::equal
                                  ? lhs == row.c.rhs
                                  : lhs >= row.c.rhs);
      double value = penalty->value_at(x);
      if (satisfied) {
        CHECK(value == 0.0);
      } else {
        CHECK(value >= 2.5);
      }
    }
  }
}

TEST_CASE("penalty_pattern returns no-match for other shapes") {
  CHECK(!penalty_pattern(view2(2, 1, Relation::less_equal, 1), 1.0));
  CHECK(!penalty_pattern(view2(1, 1, Relation::less_equal, 2), 1.0));
  BinaryTermConstraint four;
  four.terms = {{0, 1.0}, {1, 1.0}, {2, 1.0}, {3, 1.0}};
  four.relation = Relation::less_equal;
  four.rhs = 1;
  CHECK(!penalty_pattern(four, 1.0));
}

TEST_CASE("squared_penalty expands (lhs - rhs)^2") {
  PolyExpr x1;
  x1.add_term({0}, 1.0);

  // 4 (x - 1)^2 = 4 - 4x.
  PolyExpr pinned = squared_penalty(x1, 1.0, 4.0);
  PolyExpr expect;
  expect.add_term({}, 4.0).add_term({0}, -4.0);
  CHECK(pinned == expect);

  // 0 = 0 compiles away entirely.
  CHECK(squared_penalty(PolyExpr{}, 0.0, 10.0) == PolyExpr{});
}

TEST_CASE("squared_penalty matches the table row for x1 + x2 = 1") {
  PolyExpr lhs;
  lhs.add_term({0}, 1.0).add_term({1}, 1.0);
  PolyExpr squared = squared_penalty(lhs, 1.0, 10.0);
  auto pattern = penalty_pattern(view2(1, 1, Relation::equal, 1), 10.0);
  REQUIRE(pattern);
  CHECK(squared == *pattern);
}

// ---------------------------------------------------------------------------
// quadratize
// ---------------------------------------------------------------------------

TEST_CASE("quadratize leaves quadratic inputs alone") {
  PolyExpr p;
  p.add_term({0, 1}, 2.0).add_term({2}, -1.0).add_term({}, 5.0);
  QuadratizeResult r = quadratize(p, 10.0);
  CHECK(r.aux.empty());
  CHECK(r.poly == p);
}

TEST_CASE("quadratize reduces a cubic with the stated gadget") {
  PolyExpr p;
  p.add_term({0, 1, 2}, 1.0);
  QuadratizeResult r = quadratize(p, 8.0);
  REQUIRE(r.aux.size() == 1);
  CHECK(r.aux[0].parent_a == 0);  // ties break at the lowest pair
  CHECK(r.aux[0].parent_b == 1);
  VarId y = r.aux[0].id;
  CHECK(y == 3);

  PolyExpr expect;
  expect.add_term({y, 2}, 1.0);
  expect.add_term({0, 1}, 8.0);
  expect.add_term({0, y}, -16.0);
  expect.add_term({1, y}, -16.0);
  expect.add_term({y}, 24.0);
  CHECK(r.poly == expect);
}

TEST_CASE("the gadget vanishes exactly when y = x_i x_j") {
  double p = 5.0;
  PolyExpr gadget;
  gadget.add_term({0, 1}, p);
  gadget.add_term({0, 2}, -2 * p);
  gadget.add_term({1, 2}, -2 * p);
  gadget.add_term({2}, 3 * p);
  for (std::uint32_t mask = 0; mask < 8; ++mask) {
    Assignment x = bits_of(mask, 3);
    double value = gadget.value_at(x);
    if (x[2] == (x[0] & x[1])) {
      CHECK(value == 0.0);
    } else {
      CHECK((value == p || value == 3 * p));
    }
  }
}

TEST_CASE("quadratize preserves per-assignment minima") {
  std::mt19937_64 rng(42);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t n = 4 + rng() % 3;  // up to 6 variables
    PolyExpr p;
    int terms = 2 + static_cast<int>(rng() % 5);
    for (int t = 0; t < terms; ++t) {
      std::size_t deg = 1 + rng() % 4;  // up to quartic
      std::vector<VarId> vars;
      for (std::size_t d = 0; d < deg; ++d) {
        vars.push_back(static_cast<VarId>(rng() % n));
      }
      double coeff = static_cast<double>(static_cast<int>(rng() % 9)) - 4.0;
      p.add_term(vars, coeff);
    }
    double bound = quadratize_penalty_bound(p);
    QuadratizeResult r = quadratize(p, bound, static_cast<VarId>(n));
    CHECK(r.poly.degree() <= 2);

    std::size_t aux = r.aux.size();
    REQUIRE(aux <= 12);
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      Assignment x = bits_of(mask, n + aux);
      double original = p.value_at(x);
      double reduced_min = 1e300;
      for (std::uint32_t amask = 0; amask < (1u << aux); ++amask) {
        for (std::size_t a = 0; a < aux; ++a) x[n + a] = (amask >> a) & 1;
        reduced_min = std::min(reduced_min, r.poly.value_at(x));
      }
      CHECK(reduced_min == doctest::Approx(original).epsilon(1e-12));
    }
  }
}

// ---------------------------------------------------------------------------
// compile / decode
// ---------------------------------------------------------------------------

TEST_CASE("compile reproduces the two-variable example") {
  IlpModel m;
  m.add_variable("x1", 0, 1);
  m.add_variable("x2", 0, 1);
  m.objective.add_linear("x1", 5);
  m.objective.add_linear("x2", 9);
  m.objective.add_quadratic("x1", "x2", -6);

  CompileResult r = compile(m);
  CHECK(r.model.num_vars() == 2);
  CHECK(r.model.linear_at(0) == 5.0);
  CHECK(r.model.linear_at(1) == 9.0);
  CHECK(r.model.quadratic_at(0, 1) == -6.0);
  CHECK(r.model.offset() == 0.0);

  SampleSet ground = brute_force(r.model);
  REQUIRE(ground.samples.size() == 1);
  CHECK(ground.samples[0].assignment == Assignment{0, 0});
  CHECK(ground.samples[0].energy == 0.0);
}

TEST_CASE("compile of the empty model is the empty model") {
  CompileResult r = compile(IlpModel{});
  CHECK(r.model.num_vars() == 0);
  CHECK(r.model.offset() == 0.0);
  CHECK(r.map.num_vars == 0);
}

TEST_CASE("compile names undeclared variables in errors") {
  IlpModel m;
  m.add_variable("y", 0, 3);
  Constraint c;
  c.name = "bad";
  c.lhs.add("z", 1.0);
  c.relation = Relation::greater_equal;
  c.rhs = 1;
  m.constraints.push_back(c);
  try {
    compile(m);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("'z'") != std::string::npos);
  }
}

TEST_CASE("compile rejects duplicate constraint names") {
  IlpModel m;
  m.add_variable("x", 0, 1);
  Constraint c;
  c.name = "twice";
  c.lhs.add("x", 1.0);
  c.relation = Relation::equal;
  c.rhs = 1;
  m.constraints.push_back(c);
  m.constraints.push_back(c);
  CHECK_THROWS_AS(compile(m), Error);
}

TEST_CASE("compile: minimize y subject to y >= 2") {
  IlpModel m;
  m.add_variable("y1", 0, 3);
  m.objective.add_linear("y1", 1.0);
  Constraint c;
  c.name = "atleast2";
  c.lhs.add("y1", 1.0);
  c.relation = Relation::greater_equal;
  c.rhs = 2;
  m.constraints.push_back(c);

  CompileResult r = compile(m);
  SampleSet ground = brute_force(r.model);
  REQUIRE(!ground.samples.empty());
  for (const auto& sample : ground.samples) {
    DecodeResult decoded = decode(sample.assignment, r.map, m);
    CHECK(decoded.values.at("y1") == 2);
    CHECK(decoded.feasible);
    REQUIRE(decoded.constraints.size() == 1);
    CHECK(decoded.constraints[0].satisfied);
    REQUIRE(decoded.constraints[0].slack_value.has_value());
    CHECK(*decoded.constraints[0].slack_value == 0);
  }
}

TEST_CASE("decode reads fixed variables and reports violations") {
  IlpModel m;
  m.add_variable("y", 3, 3);
  CompileResult r = compile(m);
  CHECK(r.map.num_vars == 0);
  DecodeResult decoded = decode({}, r.map, m);
  CHECK(decoded.values.at("y") == 3);

  IlpModel with_constraint;
  with_constraint.add_variable("x", 0, 1);
  Constraint c;
  c.name = "must";
  c.lhs.add("x", 1.0);
  c.relation = Relation::equal;
  c.rhs = 1;
  with_constraint.constraints.push_back(c);
  CompileResult cr = compile(with_constraint);
  DecodeResult bad = decode({0}, cr.map, with_constraint);
  CHECK(!bad.feasible);
  REQUIRE(bad.constraints.size() == 1);
  CHECK(!bad.constraints[0].satisfied);
  CHECK(bad.constraints[0].name == "must");
}

TEST_CASE("hard constraints multiply the penalty by the hard factor") {
  IlpModel m;
  m.add_variable("x", 0, 1);
  Constraint c;
  c.name = "pin";
  c.lhs.add("x", 1.0);
  c.relation = Relation::equal;
  c.rhs = 1;
  c.penalty = 2.0;
  c.hardness = Hardness::hard;
  m.constraints.push_back(c);
  CompileConfig config;
  config.hard_factor = 10.0;
  CompileResult r = compile(m, config);
  // 2 * 10 * (x-1)^2 = 20 - 20x.
  CHECK(r.model.linear_at(0) == -20.0);
  CHECK(r.model.offset() == 20.0);
}

TEST_CASE("pattern-matched inequalities do not allocate slack bits") {
  IlpModel m;
  m.add_variable("x1", 0, 1);
  m.add_variable("x2", 0, 1);
  Constraint c;
  c.name = "pair";
  c.lhs.add("x1", 1.0).add("x2", 1.0);
  c.relation = Relation::less_equal;
  c.rhs = 1;
  c.penalty = 7.0;
  m.constraints.push_back(c);
  CompileResult r = compile(m);
  CHECK(r.map.num_vars == 2);
  CHECK(r.map.slacks.empty());
  CHECK(r.model.quadratic_at(0, 1) == 7.0);
}

TEST_CASE("compiled minimizers decode to the ilp optima") {
  std::mt19937_64 rng(777);
  auto rand_int = [&](int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
  };

  int checked = 0;
  for (int trial = 0; trial < 40; ++trial) {
    IlpModel m;
    int nv = rand_int(1, 3);
    for (int v = 0; v < nv; ++v) {
      int lower = rand_int(-2, 2);
      m.add_variable("y" + std::to_string(v), lower, lower + rand_int(0, 7));
    }
    for (const auto& v : m.variables) {
      int c = rand_int(-3, 3);
      if (c != 0) m.objective.add_linear(v.name, c);
    }
    int nc = rand_int(0, 2);
    for (int k = 0; k < nc; ++k) {
      Constraint c;
      c.name = "c" + std::to_string(k);
      double anchor = 0;
      for (const auto& v : m.variables) {
        int coeff = rand_int(-2, 2);
        if (coeff != 0) {
          c.lhs.add(v.name, coeff);
          // Anchor the rhs near a known-feasible point (the lower bounds).
          anchor += coeff * static_cast<double>(v.lower);
        }
      }
      c.relation = static_cast<Relation>(rand_int(0, 2));
      c.rhs = anchor + rand_int(-1, 1);
      m.constraints.push_back(c);
    }

    CompileResult r;
    try {
      r = compile(m);
    } catch (const Error&) {
      continue;  // interval analysis found a constraint unsatisfiable
    }
    if (r.map.num_vars > 20) continue;

    // Independent oracle: exhaustive search over the integer box.
    std::vector<std::int64_t> lows, highs, point;
    for (const auto& v : m.variables) {
      lows.push_back(v.lower);
      highs.push_back(v.upper);
      point.push_back(v.lower);
    }
    double best = 1e300;
    std::set<std::vector<std::int64_t>> optima;
    while (true) {
      bool ok = true;
      for (const auto& c : m.constraints) {
        double lhs = c.lhs.constant();
        for (std::size_t v = 0; v < point.size(); ++v) {
          lhs += c.lhs.coefficient(m.variables[v].name) *
                 static_cast<double>(point[v]);
        }
        bool sat = c.relation == Relation::less_equal ? lhs <= c.rhs
                   : c.relation == Relation::equal    ? lhs == c.rhs
                                                      : lhs >= c.rhs;
        if (!sat) {
          ok = false;
          break;
        }
      }
      if (ok) {
        double obj = 0;
        for (std::size_t v = 0; v < point.size(); ++v) {
          auto it = m.objective.monomials().find({m.variables[v].name});
          if (it != m.objective.monomials().end()) {
            obj += it->second * static_cast<double>(point[v]);
          }
        }
        if (obj < best - 1e-9) {
          best = obj;
          optima.clear();
        }
        if (obj <= best + 1e-9) optima.insert(point);
      }
      std::size_t d = 0;
      while (d < point.size() && ++point[d] > highs[d]) {
        point[d] = lows[d];
        ++d;
      }
      if (d == point.size()) break;
    }
    if (optima.empty()) continue;  // no feasible integer point

    SampleSet ground = brute_force(r.model, 20);
    std::set<std::vector<std::int64_t>> decoded_optima;
    for (const auto& sample : ground.samples) {
      DecodeResult decoded = decode(sample.assignment, r.map, m);
      std::vector<std::int64_t> values;
      for (const auto& v : m.variables) {
        values.push_back(decoded.values.at(v.name));
      }
      decoded_optima.insert(values);
      CHECK(decoded.feasible);
    }
    CHECK(decoded_optima == optima);
    ++checked;
  }
  CHECK(checked >= 10);  // the generator must exercise real cases
}
