#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tcer/cea.hpp"

namespace tcer {

// ---------------------------------------------------------------------------
// Types: the cells of the partitions induced by a family of predicates or guards.

struct PredicateType {
    std::vector<bool> members;  // members[i]: P_i taken positively
    Predicate pred;             // conjunction of P_i / not P_i
};
// Satisfiable types only; pairwise disjoint and covering every event.
std::vector<PredicateType> predicate_types(const std::vector<Predicate>& preds);

struct GuardType {
    std::vector<bool> members;
    Guard guard;
};
std::vector<GuardType> guard_types(const std::vector<Guard>& guards);

// ---------------------------------------------------------------------------
// Determinization

struct NotSynchronous : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DeterminizeOptions {
    // Single-clock inputs: prune transitions that cannot lead to an output
    // and fold guard cells back into z <= c form where possible.
    bool normalize = true;
};

// Subset construction over (state set, initialized clocks). Throws
// NotSynchronous when one cell mixes transitions with different reset sets.
TimedCea determinize(const TimedCea& a, const DeterminizeOptions& opt = {});

// 2^(|Q| + 2|delta|) * |T| + 2^|Q|, as a floating value (may be inf).
long double determinization_size_bound(const TimedCea& a);

// Single-clock pass used by determinize; exposed for automata built by hand.
void normalize_single_clock(TimedCea& a);

// ---------------------------------------------------------------------------
// Synchronous-reset decision

enum class SyncVerdict { Yes, No, Unknown };
const char* sync_verdict_name(SyncVerdict v);

struct SyncWitness {
    std::vector<int> run1, run2;  // transition indices, equal length
    TimedStream stream;           // events and timestamps that both runs read
};

struct SyncResult {
    SyncVerdict verdict = SyncVerdict::Yes;
    std::optional<SyncWitness> witness;
    std::size_t explored = 0;
};

// Clock regions over values scaled by the common denominator of the guard
// constants; values above a clock's largest constant are not distinguished.
class Regions {
public:
    explicit Regions(const TimedCea& a);
    // The unique representative of v's region.
    Valuation canon(const Valuation& v) const;
    // Delays reaching every time-successor region of v.
    std::vector<Rational> delays(const Valuation& v) const;

private:
    std::int64_t max_of(const Clock& z) const;
    std::int64_t scale_ = 1;
    std::map<Clock, std::int64_t> max_;
};

SyncResult check_sync(const TimedCea& a, std::size_t cap = 1'000'000);

// Replays both runs from the initial state: same labels everywhere, equal
// resets before the last step, different resets on the last step.
bool verify_sync_witness(const TimedCea& a, const SyncWitness& w);

}  // namespace tcer
