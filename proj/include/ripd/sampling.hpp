#ifndef RIPD_SAMPLING_HPP
#define RIPD_SAMPLING_HPP

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "ripd/errors.hpp"
#include "ripd/rng.hpp"

namespace ripd {

enum class PlanMode { IndependentBernoulli, UniformSingleBlock, ExplicitTable };
enum class CouplingDirection { None, PrimalFollowsDual, DualFollowsPrimal };

struct MaskTableEntry {
  std::uint64_t bits = 0;
  double prob = 0.0;
};

/// One realization of the activation vector: which blocks update.
struct ActivationMask {
  std::vector<std::uint8_t> bits;

  int active_count() const {
    return static_cast<int>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
  }

  bool any() const { return active_count() > 0; }

  std::uint64_t as_bits() const {
    if (bits.size() > 64) return 0;
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < bits.size(); ++i)
      if (bits[i]) v |= (1ull << i);
    return v;
  }
};

/// Distribution of the activation masks. Draws are i.i.d. across iterations
/// and never the all-zero mask; the stream is generated by a dedicated
/// generator seeded independently of any iterate, so masks cannot depend on
/// the trajectory.
///
/// A plan may carry a coupling derivation (see enforce_coupling): the
/// dependent side's bits are computed from the sampled driver bits through
/// the coupling sparsity, either OR-ed onto the dependent side's own draw or
/// replacing it ("minimal" mode).
struct SamplingPlan {
  PlanMode mode = PlanMode::IndependentBernoulli;
  long m = 0;
  std::vector<double> bernoulli_q;     // raw per-block probabilities, before conditioning
  std::vector<MaskTableEntry> table;   // explicit distribution over nonzero masks
  std::uint64_t rng_seed = 0;

  CouplingDirection coupling = CouplingDirection::None;
  bool minimal_coupling = false;
  long primal_blocks = 0;                        // p; blocks p..m-1 are the dual side
  std::vector<std::vector<long>> dep_support;    // per dependent block: driver indices in [0,m)

  static SamplingPlan bernoulli(std::vector<double> q, std::uint64_t seed) {
    SamplingPlan p;
    p.mode = PlanMode::IndependentBernoulli;
    p.m = static_cast<long>(q.size());
    p.bernoulli_q = std::move(q);
    p.rng_seed = seed;
    return p;
  }

  static SamplingPlan bernoulli_uniform(long m, double q, std::uint64_t seed) {
    return bernoulli(std::vector<double>(static_cast<std::size_t>(m), q), seed);
  }

  static SamplingPlan uniform_single(long m, std::uint64_t seed) {
    SamplingPlan p;
    p.mode = PlanMode::UniformSingleBlock;
    p.m = m;
    p.rng_seed = seed;
    return p;
  }

  static SamplingPlan explicit_table(long m, std::vector<MaskTableEntry> entries,
                                     std::uint64_t seed) {
    SamplingPlan p;
    p.mode = PlanMode::ExplicitTable;
    p.m = m;
    p.table = std::move(entries);
    p.rng_seed = seed;
    return p;
  }

  /// Deterministic full activation.
  static SamplingPlan full(long m) { return bernoulli_uniform(m, 1.0, 0); }

  long dual_blocks() const { return m - primal_blocks; }

  bool coupled() const { return coupling != CouplingDirection::None; }

  /// Absolute block index of dependent slot d.
  long dependent_index(long d) const {
    return coupling == CouplingDirection::PrimalFollowsDual ? d : primal_blocks + d;
  }

  long dependent_count() const {
    return coupling == CouplingDirection::PrimalFollowsDual ? primal_blocks : dual_blocks();
  }

  bool is_driver(long i) const {
    if (coupling == CouplingDirection::PrimalFollowsDual) return i >= primal_blocks;
    return i < primal_blocks;
  }
};

inline void validate_plan(const SamplingPlan& plan) {
  if (plan.m < 1) throw InvalidInputError("SamplingPlan: need at least one block");
  switch (plan.mode) {
    case PlanMode::IndependentBernoulli: {
      if (static_cast<long>(plan.bernoulli_q.size()) != plan.m)
        throw InvalidInputError("SamplingPlan: probability list length does not match m");
      for (double q : plan.bernoulli_q)
        if (!(q > 0.0) || q > 1.0)
          throw InvalidInputError("SamplingPlan: raw probabilities must lie in (0, 1]");
      break;
    }
    case PlanMode::UniformSingleBlock:
      break;
    case PlanMode::ExplicitTable: {
      if (plan.m > 64)
        throw InvalidInputError("SamplingPlan: explicit tables are capped at 64 blocks");
      if (plan.table.empty()) throw InvalidInputError("SamplingPlan: empty mask table");
      double total = 0.0;
      std::vector<double> marg(static_cast<std::size_t>(plan.m), 0.0);
      for (const auto& e : plan.table) {
        if (e.bits == 0)
          throw InvalidInputError("SamplingPlan: the all-zero mask must have probability zero");
        if (plan.m < 64 && (e.bits >> plan.m) != 0)
          throw InvalidInputError("SamplingPlan: table mask uses bits beyond m");
        if (!(e.prob > 0.0)) throw InvalidInputError("SamplingPlan: table entries need prob > 0");
        total += e.prob;
        for (long i = 0; i < plan.m; ++i)
          if (e.bits & (1ull << i)) marg[static_cast<std::size_t>(i)] += e.prob;
      }
      if (std::abs(total - 1.0) > 1e-9)
        throw InvalidInputError("SamplingPlan: table probabilities must sum to 1");
      for (double p : marg)
        if (!(p > 0.0))
          throw InvalidInputError(
              "SamplingPlan: every block needs a positive activation marginal");
      break;
    }
  }
  if (plan.coupled()) {
    if (plan.primal_blocks < 1 || plan.primal_blocks >= plan.m)
      throw InvalidInputError("SamplingPlan: coupled plan needs 0 < p < m");
    if (static_cast<long>(plan.dep_support.size()) != plan.dependent_count())
      throw InvalidInputError("SamplingPlan: dependent support table has wrong length");
    for (const auto& sup : plan.dep_support)
      for (long i : sup)
        if (i < 0 || i >= plan.m || !plan.is_driver(i))
          throw InvalidInputError("SamplingPlan: dependent support must list driver blocks");
  }
}

namespace detail {

inline void derive_coupled_bits(const SamplingPlan& plan, ActivationMask& mask) {
  for (long d = 0; d < plan.dependent_count(); ++d) {
    const long idx = plan.dependent_index(d);
    std::uint8_t coupled = 0;
    for (long drv : plan.dep_support[static_cast<std::size_t>(d)])
      coupled |= mask.bits[static_cast<std::size_t>(drv)];
    auto& bit = mask.bits[static_cast<std::size_t>(idx)];
    bit = plan.minimal_coupling ? coupled : static_cast<std::uint8_t>(bit | coupled);
  }
}

}  // namespace detail

/// Draws activation masks from a validated plan. One sampler per run.
class MaskSampler {
 public:
  explicit MaskSampler(const SamplingPlan& plan) : plan_(plan), rng_(plan.rng_seed) {
    validate_plan(plan_);
    if (plan_.coupled() && plan_.minimal_coupling && plan_.mode == PlanMode::ExplicitTable) {
      // a table whose entries never fire a driver bit would reject every draw
      double accepted = 0.0;
      for (const auto& e : plan_.table)
        for (long i = 0; i < plan_.m; ++i)
          if (plan_.is_driver(i) && ((e.bits >> i) & 1ull)) {
            accepted += e.prob;
            break;
          }
      if (!(accepted > 0.0))
        throw InvalidInputError("SamplingPlan: coupled table never activates a driver block");
    }
    if (plan_.mode == PlanMode::ExplicitTable) {
      cumulative_.reserve(plan_.table.size());
      double total = 0.0;
      for (const auto& e : plan_.table) total += e.prob;
      double acc = 0.0;
      for (const auto& e : plan_.table) {
        acc += e.prob / total;
        cumulative_.push_back(acc);
      }
      cumulative_.back() = 1.0;
    }
  }

  const SamplingPlan& plan() const { return plan_; }

  ActivationMask sample() {
    for (;;) {
      ActivationMask mask = sample_base();
      if (plan_.coupled()) detail::derive_coupled_bits(plan_, mask);
      if (mask.any()) return mask;
      // minimal coupling can zero out the mask when no driver fired; redraw
    }
  }

 private:
  ActivationMask sample_base() {
    ActivationMask mask;
    mask.bits.assign(static_cast<std::size_t>(plan_.m), 0);
    switch (plan_.mode) {
      case PlanMode::IndependentBernoulli: {
        do {
          for (long i = 0; i < plan_.m; ++i)
            mask.bits[static_cast<std::size_t>(i)] =
                rng_.uniform01() < plan_.bernoulli_q[static_cast<std::size_t>(i)] ? 1 : 0;
        } while (!mask.any());  // conditioned on the nonzero set
        break;
      }
      case PlanMode::UniformSingleBlock: {
        mask.bits[static_cast<std::size_t>(rng_.index(static_cast<std::uint64_t>(plan_.m)))] = 1;
        break;
      }
      case PlanMode::ExplicitTable: {
        const double u = rng_.uniform01();
        std::size_t idx = static_cast<std::size_t>(
            std::lower_bound(cumulative_.begin(), cumulative_.end(), u) - cumulative_.begin());
        if (idx >= plan_.table.size()) idx = plan_.table.size() - 1;
        const std::uint64_t bits = plan_.table[idx].bits;
        for (long i = 0; i < plan_.m; ++i)
          mask.bits[static_cast<std::size_t>(i)] = (bits >> i) & 1ull ? 1 : 0;
        break;
      }
    }
    return mask;
  }

  SamplingPlan plan_;
  Rng rng_;
  std::vector<double> cumulative_;
};

/// Draws one mask from a fresh sampler stream; convenience entry point.
inline ActivationMask sample_mask(const SamplingPlan& plan) { return MaskSampler(plan).sample(); }

/// Exact per-block activation marginals of the induced distribution,
/// including any coupling derivation and conditioning.
inline std::vector<double> marginals(const SamplingPlan& plan) {
  validate_plan(plan);
  const auto mz = static_cast<std::size_t>(plan.m);
  std::vector<double> p(mz, 0.0);

  if (!plan.coupled()) {
    switch (plan.mode) {
      case PlanMode::IndependentBernoulli: {
        double none = 1.0;
        for (double q : plan.bernoulli_q) none *= 1.0 - q;
        const double z = 1.0 - none;
        for (std::size_t i = 0; i < mz; ++i) p[i] = plan.bernoulli_q[i] / z;
        break;
      }
      case PlanMode::UniformSingleBlock:
        std::fill(p.begin(), p.end(), 1.0 / static_cast<double>(plan.m));
        break;
      case PlanMode::ExplicitTable: {
        double total = 0.0;
        for (const auto& e : plan.table) total += e.prob;
        for (const auto& e : plan.table)
          for (std::size_t i = 0; i < mz; ++i)
            if (e.bits & (1ull << i)) p[i] += e.prob / total;
        break;
      }
    }
    return p;
  }

  // Coupled plans. The accepted event is "some driver bit fired" in minimal
  // mode and "some base bit fired" otherwise.
  switch (plan.mode) {
    case PlanMode::IndependentBernoulli: {
      auto none_over = [&](auto&& keep) {
        double v = 1.0;
        for (long i = 0; i < plan.m; ++i)
          if (keep(i)) v *= 1.0 - plan.bernoulli_q[static_cast<std::size_t>(i)];
        return v;
      };
      const double z = plan.minimal_coupling
                           ? 1.0 - none_over([&](long i) { return plan.is_driver(i); })
                           : 1.0 - none_over([](long) { return true; });
      for (long i = 0; i < plan.m; ++i)
        if (plan.is_driver(i)) p[static_cast<std::size_t>(i)] =
            plan.bernoulli_q[static_cast<std::size_t>(i)] / z;
      for (long d = 0; d < plan.dependent_count(); ++d) {
        const long idx = plan.dependent_index(d);
        double none = 1.0;
        for (long drv : plan.dep_support[static_cast<std::size_t>(d)])
          none *= 1.0 - plan.bernoulli_q[static_cast<std::size_t>(drv)];
        if (!plan.minimal_coupling)
          none *= 1.0 - plan.bernoulli_q[static_cast<std::size_t>(idx)];
        p[static_cast<std::size_t>(idx)] = (1.0 - none) / z;
      }
      break;
    }
    case PlanMode::UniformSingleBlock: {
      long drivers = 0;
      for (long i = 0; i < plan.m; ++i)
        if (plan.is_driver(i)) ++drivers;
      if (plan.minimal_coupling) {
        for (long i = 0; i < plan.m; ++i)
          if (plan.is_driver(i))
            p[static_cast<std::size_t>(i)] = 1.0 / static_cast<double>(drivers);
        for (long d = 0; d < plan.dependent_count(); ++d)
          p[static_cast<std::size_t>(plan.dependent_index(d))] =
              static_cast<double>(plan.dep_support[static_cast<std::size_t>(d)].size()) /
              static_cast<double>(drivers);
      } else {
        for (long i = 0; i < plan.m; ++i)
          if (plan.is_driver(i)) p[static_cast<std::size_t>(i)] = 1.0 / static_cast<double>(plan.m);
        for (long d = 0; d < plan.dependent_count(); ++d)
          p[static_cast<std::size_t>(plan.dependent_index(d))] =
              (1.0 + static_cast<double>(plan.dep_support[static_cast<std::size_t>(d)].size())) /
              static_cast<double>(plan.m);
      }
      break;
    }
    case PlanMode::ExplicitTable: {
      double accepted = 0.0;
      for (const auto& e : plan.table) {
        ActivationMask mask;
        mask.bits.assign(mz, 0);
        for (long i = 0; i < plan.m; ++i)
          mask.bits[static_cast<std::size_t>(i)] = (e.bits >> i) & 1ull ? 1 : 0;
        detail::derive_coupled_bits(plan, mask);
        if (!mask.any()) continue;
        accepted += e.prob;
        for (std::size_t i = 0; i < mz; ++i)
          if (mask.bits[i]) p[i] += e.prob;
      }
      if (accepted <= 0.0)
        throw InvalidInputError("marginals: coupled table accepts no mask");
      for (auto& v : p) v /= accepted;
      break;
    }
  }
  return p;
}

/// Derives a coupled plan over p + q blocks from coupling support sets.
/// For PrimalFollowsDual, primal bit j becomes (own draw OR max of the dual
/// bits in support_j); minimal mode keeps only the max. DualFollowsPrimal is
/// symmetric. Supports list, per dependent block, the absolute indices of its
/// driver blocks.
inline SamplingPlan make_coupled_plan(SamplingPlan plan, long primal_blocks,
                                      CouplingDirection direction,
                                      std::vector<std::vector<long>> dep_support,
                                      bool minimal = false) {
  if (direction == CouplingDirection::None)
    throw InvalidInputError("make_coupled_plan: a coupling direction is required");
  plan.coupling = direction;
  plan.primal_blocks = primal_blocks;
  plan.dep_support = std::move(dep_support);
  plan.minimal_coupling = minimal;
  validate_plan(plan);
  return plan;
}

}  // namespace ripd

#endif  // RIPD_SAMPLING_HPP
