/**
 * @file group.hpp
 * @brief Chord-tangent group law on a smooth plane cubic, over Q and over
 *        prime fields.
 *
 * The binary cubic obtained by restricting F to a line is factored
 * exactly: the two known roots are removed, so no root extraction is ever
 * needed and everything stays in the base field.
 */
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "cubicount/curve.hpp"

namespace cubicount {

/// Smooth cubic together with a rational base point O; (C, +, O).
struct GroupContext {
  CubicForm form;
  ProjPoint base;
};

/// Same over F_p; p must be a prime of good reduction.
struct FpGroupContext {
  FpCubic form;
  FpPoint base;
};

/// Context construction checks the base point lies on the curve.
GroupContext make_group_context(const CubicForm& f, const ProjPoint& base);

/// Reduces a rational context at a good prime. Throws on bad reduction.
FpGroupContext make_fp_group_context(const CubicForm& f, std::uint64_t p,
                                     std::optional<FpPoint> base = std::nullopt);
FpGroupContext make_fp_group_context(const GroupContext& ctx, std::uint64_t p);

/// Third point of intersection of the line PQ (tangent when P = Q) with
/// the curve. Both points must lie on the curve.
ProjPoint third_intersection(const CubicForm& f, const ProjPoint& p, const ProjPoint& q);
FpPoint third_intersection(const FpCubic& f, const FpPoint& p, const FpPoint& q);

ProjPoint add(const GroupContext& ctx, const ProjPoint& p, const ProjPoint& q);
ProjPoint negate(const GroupContext& ctx, const ProjPoint& p);
ProjPoint sub(const GroupContext& ctx, const ProjPoint& p, const ProjPoint& q);
ProjPoint scalar_mul(const GroupContext& ctx, long m, const ProjPoint& p);

FpPoint add(const FpGroupContext& ctx, const FpPoint& p, const FpPoint& q);
FpPoint negate(const FpGroupContext& ctx, const FpPoint& p);
FpPoint sub(const FpGroupContext& ctx, const FpPoint& p, const FpPoint& q);
FpPoint scalar_mul(const FpGroupContext& ctx, long m, const FpPoint& p);

/// Whether [P] = m[Q] - (m-1)[R] holds in the divisor class group. The
/// coefficients sum to 1, so the verdict does not depend on the base
/// point; `check_divisor_relation` uses R as its working base.
bool check_divisor_relation(const CubicForm& f, long m, const ProjPoint& p,
                            const ProjPoint& q, const ProjPoint& r);
bool check_divisor_relation_with_base(const CubicForm& f, long m, const ProjPoint& p,
                                      const ProjPoint& q, const ProjPoint& r,
                                      const ProjPoint& base);

/// Bounded search for S among the candidates with m*S = D. Absence is not
/// a proof of indivisibility.
std::optional<ProjPoint> divide_point(const GroupContext& ctx, long m, const ProjPoint& d,
                                      const std::vector<ProjPoint>& candidates);

}  // namespace cubicount
