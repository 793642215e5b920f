#pragma once

#include <optional>
#include <string_view>

#include "twrc/channel.hpp"

namespace twrc {

enum class RRow { R1, R2, R3 };
enum class TCol { T1, T2, T3, T4, T5 };

/// Link-state cell of (gr1^2, gr2^2), plus whether
/// g12^2 (1 + gr1^2 P) <= g12^2 + g1r^2 holds (the table's precondition).
struct Regime {
  RRow r = RRow::R1;
  TCol t = TCol::T1;
  bool side_condition_holds = true;

  friend bool operator==(const Regime&, const Regime&) = default;
};

enum class Technique { DirectTransmission, Independent, BlockMarkov, Both };

struct SchemeAssignment {
  Technique user1 = Technique::DirectTransmission;
  Technique user2 = Technique::DirectTransmission;

  friend bool operator==(const SchemeAssignment&, const SchemeAssignment&) = default;
};

struct TechniqueLookup {
  SchemeAssignment assignment;
  // Set only for mu == 1/2: the transposed-table orientation.
  std::optional<SchemeAssignment> alternate;
  bool ambiguous = false;
};

Regime classify(const LinkGains& g);

/// Stored optimal-technique table for mu in (1/2, 1].
SchemeAssignment table_entry(RRow r, TCol t);

SchemeAssignment transpose(SchemeAssignment a);

/// Table lookup for an already-classified regime. For mu < 1/2 the regime
/// must come from swap_users(g) and the transposed entry is returned.
/// mu == 1/2 needs both orientations; use the gains overload.
TechniqueLookup technique_lookup(const Regime& reg, double mu);

/// Classifies (swapping users when mu < 1/2) and looks the cell up.
TechniqueLookup technique_lookup(const LinkGains& g, double mu);

std::string_view to_string(RRow r);
std::string_view to_string(TCol t);
/// Table legend labels: "DT", "Ind", "BM", "Both".
std::string_view to_string(Technique t);
Technique technique_from_string(std::string_view s);

bool uses_block_markov(Technique t);

}  // namespace twrc
