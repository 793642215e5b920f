#include "twrc/regimes.hpp"

#include <array>
#include <string>

#include "twrc/errors.hpp"

namespace twrc {

namespace {

double sq(double v) { return v * v; }

using enum Technique;

// Rows R1..R3, columns T1..T5; valid for mu in (1/2, 1] with the side condition.
constexpr std::array<std::array<SchemeAssignment, 5>, 3> kTable{{
    {{{DirectTransmission, DirectTransmission},
      {DirectTransmission, Independent},
      {DirectTransmission, Independent},
      {DirectTransmission, BlockMarkov},
      {DirectTransmission, BlockMarkov}}},
    {{{Independent, DirectTransmission},
      {Independent, DirectTransmission},
      {Independent, Independent},
      {Independent, Independent},
      {Independent, BlockMarkov}}},
    {{{BlockMarkov, DirectTransmission},
      {BlockMarkov, DirectTransmission},
      {BlockMarkov, Independent},
      {Both, Both},
      {Both, Both}}},
}};

void require_weight(double mu) {
  if (!(mu >= 0.0 && mu <= 1.0)) throw InvalidInput("mu", "must lie in [0, 1]");
}

}  // namespace

Regime classify(const LinkGains& g) {
  const double p = g.p;
  const double r1 = sq(g.gr1);
  const double r2 = sq(g.gr2);
  const double d21 = sq(g.g21);
  const double d12 = sq(g.g12);
  const double relay_boost = 1.0 + r1 * p;

  Regime reg;
  // Intervals are closed on the right, open on the left.
  if (r1 <= d21) {
    reg.r = RRow::R1;
  } else if (r1 <= d21 + sq(g.g2r)) {
    reg.r = RRow::R2;
  } else {
    reg.r = RRow::R3;
  }

  const double t2_top = d12 * relay_boost;
  const double t3_top = d12 + sq(g.g1r);
  const double t4_top = relay_boost * (d12 + sq(g.g1r));
  if (r2 <= d12) {
    reg.t = TCol::T1;
  } else if (r2 <= t2_top) {
    reg.t = TCol::T2;
  } else if (r2 <= t3_top) {
    reg.t = TCol::T3;
  } else if (r2 <= t4_top) {
    reg.t = TCol::T4;
  } else {
    reg.t = TCol::T5;
  }
  reg.side_condition_holds = t2_top <= t3_top;
  return reg;
}

SchemeAssignment table_entry(RRow r, TCol t) {
  return kTable[static_cast<std::size_t>(r)][static_cast<std::size_t>(t)];
}

SchemeAssignment transpose(SchemeAssignment a) { return {a.user2, a.user1}; }

TechniqueLookup technique_lookup(const Regime& reg, double mu) {
  require_weight(mu);
  if (mu == 0.5) throw InvalidInput("mu", "mu = 1/2 needs both orientations; pass the gains");
  if (!reg.side_condition_holds) {
    throw UnsupportedSideCondition(
        "technique table does not cover g12^2(1+gr1^2 P) > g12^2+g1r^2; use the numeric solver");
  }
  SchemeAssignment a = table_entry(reg.r, reg.t);
  return {mu > 0.5 ? a : transpose(a), std::nullopt, false};
}

TechniqueLookup technique_lookup(const LinkGains& g, double mu) {
  require_weight(mu);
  if (mu > 0.5) return technique_lookup(classify(g), mu);
  if (mu < 0.5) return technique_lookup(classify(swap_users(g)), mu);
  TechniqueLookup out = technique_lookup(classify(g), 1.0);
  out.alternate = technique_lookup(classify(swap_users(g)), 0.0).assignment;
  out.ambiguous = true;
  return out;
}

std::string_view to_string(RRow r) {
  static constexpr std::array<std::string_view, 3> names{"R1", "R2", "R3"};
  return names[static_cast<std::size_t>(r)];
}

std::string_view to_string(TCol t) {
  static constexpr std::array<std::string_view, 5> names{"T1", "T2", "T3", "T4", "T5"};
  return names[static_cast<std::size_t>(t)];
}

std::string_view to_string(Technique t) {
  switch (t) {
    case DirectTransmission: return "DT";
    case Independent: return "Ind";
    case BlockMarkov: return "BM";
    case Both: return "Both";
  }
  return "?";
}

Technique technique_from_string(std::string_view s) {
  if (s == "DT") return DirectTransmission;
  if (s == "Ind") return Independent;
  if (s == "BM") return BlockMarkov;
  if (s == "Both") return Both;
  throw InvalidInput("technique", "unknown label '" + std::string(s) + "'");
}

bool uses_block_markov(Technique t) { return t == BlockMarkov || t == Both; }

}  // namespace twrc
