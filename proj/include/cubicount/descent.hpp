/**
 * @file descent.hpp
 * @brief m-divisibility equivalence classes and construction of point
 *        pairs (P, Q) with [P] = m[Q] - (m-1)[R].
 *
 * The class partition relies on a bounded search for m-th divisions, so
 * it can only be finer than the true partition; every consumer treats it
 * as heuristic.
 */
#pragma once

#include <vector>

#include "cubicount/group.hpp"

namespace cubicount {

/// Pair on the biprojective curve X_R: [P] = m[Q] - (m-1)[R].
struct XPair {
  ProjPoint p;
  ProjPoint q;
  ProjPoint r;
  long m = 1;
};

bool operator==(const XPair& a, const XPair& b);

struct ClassPartition {
  long m = 1;
  std::vector<std::vector<ProjPoint>> classes;
  std::string method_note;
};

/// Partition points by the heuristic test "P - Q is m times some element
/// of the search set", closed transitively. The result may be finer than
/// the true partition.
ClassPartition partition_classes(const std::vector<ProjPoint>& points, long m,
                                 const GroupContext& ctx,
                                 const std::vector<ProjPoint>& search_set);

/// For each seed Q emit the pair (m*Q - (m-1)*R, Q), relation-checked and
/// deduplicated, keeping the seed order. Stops at `cap` pairs.
std::vector<XPair> build_x_points(const CubicForm& f, const ProjPoint& r, long m,
                                  const std::vector<ProjPoint>& seeds, std::size_t cap);

struct HeightExponentRow {
  XPair pair;
  BigInt h_p, h_q, h_r;
  double ratio = 0.0;  // log H(Q) / log max(3, H(P), H(R))
};

struct HeightExponentEstimate {
  double exponent = 0.0;  // max of the per-pair ratios
  std::vector<HeightExponentRow> rows;
};

/// Empirical lower estimate for the exponent A in H(Q) <= B^A. Never a
/// certified constant.
HeightExponentEstimate estimate_height_exponent(const std::vector<XPair>& pairs);

}  // namespace cubicount
