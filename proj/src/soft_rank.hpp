#pragma once

#include <vector>

namespace cghi::constraints {

// Euclidean projection onto the permutahedron spanned by permutations of
// (1, ..., n), computed by a descending sort followed by pool-adjacent-
// violators isotonic regression.
std::vector<double> proj_permutahedron(const std::vector<double>& y);

// Differentiable ascending ranks: soft_rank(x, eps) = proj_permutahedron of
// x / eps. As eps -> 0 the output approaches the hard ascending ranks
// (smallest value -> 1); as eps -> infinity it collapses to the centroid
// (n + 1) / 2. Order preserving: x_i < x_j implies rank_i <= rank_j.
struct SoftRank {
    std::vector<double> ranks;

    // Jacobian-transpose product; block-constant within PAV blocks.
    std::vector<double> backward(const std::vector<double>& upstream) const;

    // cached structure for backward
    std::vector<int> sort_idx;    // positions in descending order of x
    std::vector<int> block_id;    // PAV block per sorted position
    std::vector<int> block_size;  // per block
    double eps = 1.0;
};

SoftRank soft_rank(const std::vector<double>& x, double eps);

// Soft-rank ranking loss: 0.5 * || target - soft_rank(hi) ||^2 where the
// target is the soft rank of the reversed time order (earliest sample carries
// the largest rank), so zero loss corresponds to an HI that decreases over
// time. Gradient flows only through the hi side.
struct SoftRankLoss {
    double loss = 0.0;
    std::vector<double> grad_hi;
};

SoftRankLoss soft_rank_loss(const std::vector<double>& hi, const std::vector<double>& time_coord,
                            double eps);

}  // namespace cghi::constraints
