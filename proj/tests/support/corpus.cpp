#include "corpus.hpp"

namespace pencil::testing {

Poly poly(std::size_t n, std::vector<std::pair<const char*, Exponents>> terms) {
  Poly p(n);
  for (auto& [c, e] : terms) {
    e.resize(n, 0);
    p.add_term(e, Rational::parse(c));
  }
  return p;
}

Matrix<Rational> rational_matrix(std::vector<std::vector<long>> rows) {
  Matrix<Rational> m(rows.size(), Rational());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows.size(); ++j) m(i, j) = Rational(rows[i][j]);
  }
  return m;
}

Matrix<Rational> diagonal(std::vector<long> entries) {
  Matrix<Rational> m(entries.size(), Rational());
  for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = Rational(entries[i]);
  return m;
}

namespace {

CanonicalData make(Matrix<Rational> eta, std::vector<Poly> f, std::vector<Poly> psi = {},
                   std::vector<int> signs = {}) {
  return CanonicalData{ConstantBracket(std::move(eta)), std::move(f), std::move(psi), std::move(signs)};
}

}  // namespace

std::vector<CorpusItem> valid_corpus() {
  std::vector<CorpusItem> c;
  c.push_back({"n1-burgers", make(diagonal({1}), {poly(1, {{"1/2", {2}}})})});
  c.push_back({"n1-psi-only", make(diagonal({1}), {Poly(1)}, {poly(1, {{"1/2", {2}}})}, {1})});
  c.push_back({"n1-cubic",
               make(diagonal({2}), {poly(1, {{"1", {3}}, {"-1", {2}}, {"1", {1}}})},
                    {poly(1, {{"1/3", {3}}, {"-1", {2}}})}, {-1})});
  c.push_back({"n1-two-tails",
               make(diagonal({-1}), {poly(1, {{"1/2", {2}}, {"1/6", {3}}})},
                    {poly(1, {{"1", {2}}}), poly(1, {{"1/3", {3}}})}, {1, -1})});
  c.push_back({"n2-offdiag-translation",
               make(rational_matrix({{0, 1}, {1, 0}}), {poly(2, {{"1/2", {1, 0}}}), poly(2, {{"1/2", {0, 1}}})})});
  c.push_back({"n2-swap",
               make(diagonal({1, 1}), {poly(2, {{"1/2", {2, 0}}, {"1/2", {0, 2}}}), poly(2, {{"1", {1, 1}}})})});
  c.push_back({"n2-disc",
               make(diagonal({1, 1}), {poly(2, {{"1/2", {1, 0}}}), poly(2, {{"1/2", {0, 1}}})},
                    {poly(2, {{"1/2", {2, 0}}, {"1/2", {0, 2}}})}, {1})});
  c.push_back({"n2-separable",
               make(diagonal({1, -1}), {poly(2, {{"1/3", {3, 0}}}), poly(2, {{"1", {0, 2}}, {"1", {0, 1}}})},
                    {poly(2, {{"1/3", {3, 0}}}), poly(2, {{"1", {0, 2}}})}, {-1, 1})});
  // Hessians proportional to eta_{ij} commute with everything relevant.
  const Poly q3 = poly(3, {{"1/2", {2, 0, 0}}, {"1/2", {0, 2, 0}}, {"-1/2", {0, 0, 2}}});
  c.push_back({"n3-pseudo-sphere",
               make(diagonal({1, 1, -1}),
                    {q3 + poly(3, {{"1/2", {1, 0, 0}}}), poly(3, {{"1/2", {0, 1, 0}}}), poly(3, {{"1/2", {0, 0, 1}}})},
                    {q3, q3 * Rational(2)}, {1, -1})});
  c.push_back({"n3-separable",
               make(diagonal({1, 2, 1}),
                    {poly(3, {{"1", {3, 0, 0}}}), poly(3, {{"1/2", {0, 2, 0}}, {"1", {0, 1, 0}}}),
                     poly(3, {{"-1/3", {0, 0, 3}}, {"1", {0, 0, 2}}})})});
  c.push_back({"n2-separable-local",
               make(diagonal({1, 1}), {poly(2, {{"1", {2, 0}}}), poly(2, {{"1/3", {0, 3}}, {"1", {0, 1}}})})});
  c.push_back({"n3-sphere",
               make(diagonal({1, 1, 1}),
                    {poly(3, {{"1/2", {1, 0, 0}}}), poly(3, {{"1/2", {0, 1, 0}}}), poly(3, {{"1/2", {0, 0, 1}}})},
                    {poly(3, {{"1/2", {2, 0, 0}}, {"1/2", {0, 2, 0}}, {"1/2", {0, 0, 2}}})}, {-1})});
  return c;
}

std::vector<CorpusItem> mutated_corpus() {
  struct Mutation {
    const char* item;
    bool on_psi;
    std::size_t target;
    const char* coeff;
    Exponents exps;
  };
  const std::vector<Mutation> plan = {
      {"n2-swap", false, 0, "1", {1, 1}},
      {"n2-swap", false, 1, "1", {2, 0}},
      {"n2-swap", false, 0, "1", {0, 3}},
      {"n2-disc", true, 0, "1", {1, 1}},
      {"n2-disc", true, 0, "1/3", {3, 0}},
      {"n2-disc", false, 0, "1", {0, 2}},
      {"n2-separable", false, 1, "1", {1, 1}},
      {"n2-separable", true, 0, "1", {1, 2}},
      {"n2-separable", true, 1, "-1", {1, 0}},
      {"n2-offdiag-translation", false, 0, "1", {2, 0}},
      {"n2-offdiag-translation", false, 1, "1", {1, 2}},
      {"n2-separable-local", false, 0, "1", {0, 2}},
      {"n3-separable", false, 2, "1", {1, 0, 1}},
      {"n3-separable", false, 0, "1", {0, 2, 0}},
      {"n3-sphere", true, 0, "1", {1, 1, 0}},
      {"n3-sphere", false, 1, "1", {0, 0, 2}},
      {"n3-pseudo-sphere", true, 1, "1", {0, 0, 3}},
      {"n3-pseudo-sphere", false, 2, "1", {1, 1, 1}},
  };
  const auto base = valid_corpus();
  std::vector<CorpusItem> out;
  for (const Mutation& m : plan) {
    for (const CorpusItem& item : base) {
      if (item.name != m.item) continue;
      CanonicalData d = item.data;
      auto& target = m.on_psi ? d.psi[m.target] : d.F[m.target];
      target.add_term(m.exps, Rational::parse(m.coeff));
      std::string name = item.name + (m.on_psi ? "+psi" : "+F") + std::to_string(m.target + 1) + ":" + m.coeff + "*u^(";
      for (std::size_t k = 0; k < m.exps.size(); ++k) name += (k ? "," : "") + std::to_string(m.exps[k]);
      out.push_back({name + ")", std::move(d)});
    }
  }
  return out;
}

HydroBracket sphere_metric_bracket() {
  // b^{ij}_k = -delta^i_k u^j for g = delta - u u^T; rebuilt from the
  // canonical form with F^i = u^i/2, psi = |u|^2/2, eps = +1 minus its tail.
  const auto d = CanonicalData{ConstantBracket(diagonal({1, 1})),
                               {poly(2, {{"1/2", {1, 0}}}), poly(2, {{"1/2", {0, 1}}})},
                               {poly(2, {{"1/2", {2, 0}}, {"1/2", {0, 2}}})},
                               {1}};
  const HydroBracket full = canonical_bracket(d);
  return HydroBracket(full.metric(), full.conn());
}

}  // namespace pencil::testing
