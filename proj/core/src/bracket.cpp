#include "pencil/bracket.hpp"

#include <algorithm>

namespace pencil {

namespace {

void check_extent(std::size_t expected, std::size_t got, const char* what) {
  if (expected != got) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + " has extent " + std::to_string(got) +
                                                  ", expected " + std::to_string(expected));
  }
}

void check_ring(const Poly& p, std::size_t n, const char* what) {
  if (p.nvars() != n) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + " is over " + std::to_string(p.nvars()) +
                                                  " variables, expected " + std::to_string(n));
  }
}

}  // namespace

HydroBracket::HydroBracket(Matrix<Poly> metric, Tensor3<Poly> conn, std::vector<Tail> tails)
    : n_(metric.extent()), metric_(std::move(metric)), conn_(std::move(conn)), tails_(std::move(tails)) {
  if (n_ == 0) throw Error(ErrorCode::DimensionMismatch, "bracket needs at least one field");
  check_extent(n_, conn_.extent(), "connection");
  for (const Poly& p : metric_) check_ring(p, n_, "metric entry");
  for (const Poly& p : conn_) check_ring(p, n_, "connection entry");
  for (const Tail& t : tails_) {
    if (t.sign != 1 && t.sign != -1) throw Error(ErrorCode::Schema, "tail sign must be +1 or -1");
    if (t.weight.sign() <= 0) throw Error(ErrorCode::Schema, "tail weight must be positive");
    check_extent(n_, t.affinor.extent(), "affinor");
    for (const Poly& p : t.affinor) check_ring(p, n_, "affinor entry");
  }
}

std::string_view relation_name(Relation r) {
  switch (r) {
    case Relation::R01: return "01";
    case Relation::R02: return "02";
    case Relation::R03: return "03";
    case Relation::R04: return "04";
    case Relation::R05: return "05";
    case Relation::R06: return "06";
    case Relation::R07: return "07";
    case Relation::C1: return "1";
    case Relation::C2: return "2";
    case Relation::C3: return "3";
    case Relation::C4: return "4";
    case Relation::C5: return "5";
    case Relation::BW: return "bw";
    case Relation::Peter1: return "peter1";
    case Relation::Peter2: return "peter2";
    case Relation::Gauss: return "gauss";
    case Relation::Commute: return "commute";
    case Relation::Ass1: return "ass1";
    case Relation::Ass2: return "ass2";
    case Relation::BihamA: return "biham-a";
    case Relation::BihamB: return "biham-b";
    case Relation::TailExact: return "tail-exact";
    case Relation::Involution: return "involution";
    case Relation::Liouville: return "liouville";
    case Relation::Reconstruct: return "reconstruct";
  }
  return "?";
}

bool ViolationReport::contains(Relation r) const { return count(r) > 0; }

std::size_t ViolationReport::count(Relation r) const {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(), [r](const Violation& v) { return v.relation == r; }));
}

void ViolationReport::add(Relation r, std::vector<std::size_t> indices, Poly residual, std::string note) {
  entries.push_back({r, std::move(indices), std::move(residual), std::move(note)});
}

void ViolationReport::append(const ViolationReport& other) {
  entries.insert(entries.end(), other.entries.begin(), other.entries.end());
}

ViolationReport check_poisson(const HydroBracket& b) {
  const std::size_t n = b.nvars();
  const auto& g = b.metric();
  const auto& conn = b.conn();
  const auto& tails = b.tails();
  const Poly zero(n);
  ViolationReport report;

  // 01: symmetry of the metric.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      Poly r = g(i, j) - g(j, i);
      if (!r.is_zero()) report.add(Relation::R01, {i, j}, std::move(r));
    }
  }

  // 02: dg^{ij}/du^k = b^{ij}_k + b^{ji}_k.
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        Poly r = partial(g(i, j), k) - conn(i, j, k) - conn(j, i, k);
        if (!r.is_zero()) report.add(Relation::R02, {i, j, k}, std::move(r));
      }
    }
  }

  // 03: g^{is} b^{jk}_s symmetric in (i, j).
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        Poly r = zero;
        for (std::size_t s = 0; s < n; ++s) r += g(i, s) * conn(j, k, s) - g(j, s) * conn(i, k, s);
        if (!r.is_zero()) report.add(Relation::R03, {i, j, k}, std::move(r));
      }
    }
  }

  // 04: g^{is} w^j_s symmetric in (i, j).
  for (std::size_t a = 0; a < tails.size(); ++a) {
    const auto& w = tails[a].affinor;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        Poly r = zero;
        for (std::size_t s = 0; s < n; ++s) r += g(i, s) * w(j, s) - g(j, s) * w(i, s);
        if (!r.is_zero()) report.add(Relation::R04, {a, i, j}, std::move(r));
      }
    }
  }

  // 05: the affinors commute.
  for (std::size_t a = 0; a < tails.size(); ++a) {
    for (std::size_t c = a + 1; c < tails.size(); ++c) {
      const auto& wa = tails[a].affinor;
      const auto& wc = tails[c].affinor;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          Poly r = zero;
          for (std::size_t s = 0; s < n; ++s) r += wa(i, s) * wc(s, j) - wc(i, s) * wa(s, j);
          if (!r.is_zero()) report.add(Relation::R05, {a, c, i, j}, std::move(r));
        }
      }
    }
  }

  // 06: g^{is} g^{jr} dw^k_r/du^s - g^{jr} b^{ik}_s w^s_r symmetric in (i, j).
  for (std::size_t a = 0; a < tails.size(); ++a) {
    const auto& w = tails[a].affinor;
    Tensor3<Poly> dw(n, zero);  // dw(k, r, s) = d w^k_r / du^s
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t s = 0; s < n; ++s) dw(k, r, s) = partial(w(k, r), s);
      }
    }
    auto lhs = [&](std::size_t i, std::size_t j, std::size_t k) {
      Poly acc = zero;
      for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t r = 0; r < n; ++r) {
          acc += g(i, s) * g(j, r) * dw(k, r, s) - g(j, r) * conn(i, k, s) * w(s, r);
        }
      }
      return acc;
    };
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
          Poly r = lhs(i, j, k) - lhs(j, i, k);
          if (!r.is_zero()) report.add(Relation::R06, {a, i, j, k}, std::move(r));
        }
      }
    }
  }

  // 07: curvature-type identity with the tails on the right-hand side.
  Tensor4<Poly> db(n, zero);  // db(j, k, r, s) = d b^{jk}_r / du^s
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t s = 0; s < n; ++s) db(j, k, r, s) = partial(conn(j, k, r), s);
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t r = 0; r < n; ++r) {
          Poly res = zero;
          for (std::size_t s = 0; s < n; ++s) {
            res += g(i, s) * (db(j, k, r, s) - db(j, k, s, r));
            res += conn(i, k, s) * conn(s, j, r) - conn(i, j, s) * conn(s, k, r);
          }
          for (const Tail& t : tails) {
            const auto& w = t.affinor;
            Poly acc = zero;
            for (std::size_t s = 0; s < n; ++s) acc += g(i, s) * (w(j, s) * w(k, r) - w(j, r) * w(k, s));
            res -= acc * t.coefficient();
          }
          if (!res.is_zero()) report.add(Relation::R07, {i, j, k, r}, std::move(res));
        }
      }
    }
  }
  return report;
}

HydroBracket mf_bracket(Matrix<Poly> metric, Tensor3<Poly> conn, const Rational& curvature) {
  if (curvature.is_zero()) return HydroBracket(std::move(metric), std::move(conn));
  const auto c = curvature.abs().exact_sqrt();
  if (!c) {
    throw Error(ErrorCode::NonSquareCurvature,
                "|K| = " + curvature.abs().str() + " is not the square of a rational");
  }
  const std::size_t n = metric.extent();
  Tail tail;
  tail.sign = curvature.sign();
  tail.affinor = Matrix<Poly>(n, Poly(n));
  for (std::size_t i = 0; i < n; ++i) tail.affinor(i, i) = Poly::constant(n, *c);
  return HydroBracket(std::move(metric), std::move(conn), {std::move(tail)});
}

}  // namespace pencil
