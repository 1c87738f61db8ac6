#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "scenefuzz/rng.hpp"
#include "scenefuzz/scenario.hpp"

namespace scenefuzz {

enum class MutationKind { add, remove, swap, move, modify_velocity, rotate };

const char* to_string(MutationKind k);
std::optional<MutationKind> mutation_kind_from_string(std::string_view s);

enum class MoveDirection { north, south, east, west };

const char* to_string(MoveDirection d);

// Fresh obstacle placed somewhere in the ring [kAddRingMin, kAddRingMax]
// metres from the ego.
struct AddParams {
  ObstacleSpec obstacle;
};
struct RemoveParams {
  int id = 0;
};
struct SwapParams {  // exchanges positions, nothing else
  int id_a = 0;
  int id_b = 0;
};
struct MoveParams {  // axis-aligned step of exactly kMoveStep metres
  int id = 0;
  MoveDirection direction = MoveDirection::north;
};
struct ModifyVelocityParams {
  int id = 0;
  double speed = 0.0;
};
struct RotateParams {
  int id = 0;
  double delta = 0.0;  // +-pi/2
};

struct MutationOp {
  MutationKind kind = MutationKind::add;
  std::variant<AddParams, RemoveParams, SwapParams, MoveParams,
               ModifyVelocityParams, RotateParams>
      params;
};

// One-line human-readable summary, e.g. "move id=3 north".
std::string describe(const MutationOp& op);

inline constexpr double kAddRingMin = 2.0;
inline constexpr double kAddRingMax = 60.0;
inline constexpr double kMoveStep = 1.0;
inline constexpr int kMaxPlacementTries = 100;

// Kinds that make sense for this scenario: add needs head-room under the
// obstacle cap, swap needs two obstacles, the rest need at least one.
std::vector<MutationKind> applicable_kinds(const Scenario& s);

// Uniform draw over applicable_kinds. Throws MutationError when nothing
// applies (cannot happen for scenarios within the obstacle cap).
MutationKind sample_kind(const Scenario& s, Rng& rng);

// Draws concrete parameters for the given kind. Pure sampling -- the result
// may still fail placement when applied.
MutationOp sample_operator(const Scenario& s, const MapSpec& map,
                           MutationKind kind, Rng& rng);

struct ApplyResult {
  std::optional<Scenario> scenario;  // engaged on success
  std::string reason;                // failure explanation otherwise
};

// Applies the operator to a copy. Fails (empty scenario + reason) when the
// result would leave the drivable region or violate scenario validity.
ApplyResult apply_op(const Scenario& s, const MapSpec& map,
                     const MutationOp& op);

// Applies one mutation of the given kind, redrawing parameters up to
// kMaxPlacementTries times when placement fails. Throws MutationError when
// the kind is inapplicable or every attempt failed. The child keeps the
// parent's rngSeed so behaviour changes stem from the scene edit alone.
Scenario mutate(const Scenario& s, const MapSpec& map, MutationKind kind,
                Rng& rng, MutationOp* applied = nullptr);

// Picks the kind uniformly among applicable ones, then as above.
Scenario mutate(const Scenario& s, const MapSpec& map, Rng& rng,
                MutationOp* applied = nullptr);

// Random obstacle in the add-ring around the ego: uniform prototype, area-
// uniform position, uniform heading, speed in [0, category max], and a
// destination point with probability one half.
ObstacleSpec sample_obstacle(const Scenario& s, const MapSpec& map, Rng& rng,
                             int id);

// Ego placed a few metres into the first lane, destination near its far end.
EgoSpec default_ego(const MapSpec& map);

// Deterministic starter population: `count` valid scenarios with a handful
// of randomly placed obstacles each.
std::vector<Scenario> make_initial_seeds(const MapSpec& map, int count,
                                         std::uint64_t seed);

}  // namespace scenefuzz
