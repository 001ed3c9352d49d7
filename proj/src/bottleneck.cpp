#include "topogait/bottleneck.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace topogait {

namespace {

struct Point {
    double birth;
    double death;
    double diag() const { return (death - birth) / 2.0; }
};

double linf(const Point& a, const Point& b) {
    return std::max(std::abs(a.birth - b.birth), std::abs(a.death - b.death));
}

// Left side: points of A then projections of B's points onto the diagonal.
// Right side: points of B then projections of A's points. A perfect
// matching under threshold delta exists iff the bottleneck is <= delta.
class Matcher {
public:
    Matcher(const std::vector<Point>& a, const std::vector<Point>& b) : a_(a), b_(b) {}

    bool feasible(double delta) {
        const std::size_t left = a_.size() + b_.size();
        match_left_.assign(left, kFree);
        match_right_.assign(left, kFree);
        delta_ = delta;
        std::size_t matched = 0;
        for (std::size_t u = 0; u < left; ++u) {
            visited_.assign(left, false);
            if (augment(u)) ++matched;
        }
        return matched == left;
    }

private:
    static constexpr std::size_t kFree = static_cast<std::size_t>(-1);

    bool edge(std::size_t u, std::size_t v) const {
        const bool u_real = u < a_.size();
        const bool v_real = v < b_.size();
        if (u_real && v_real) return linf(a_[u], b_[v]) <= delta_;
        if (u_real) {
            // A point may retire to its own diagonal projection only.
            return v - b_.size() == u && a_[u].diag() <= delta_;
        }
        if (v_real) return u - a_.size() == v && b_[v].diag() <= delta_;
        return true;  // diagonal to diagonal is free
    }

    bool augment(std::size_t u) {
        const std::size_t right = a_.size() + b_.size();
        for (std::size_t v = 0; v < right; ++v) {
            if (visited_[v] || !edge(u, v)) continue;
            visited_[v] = true;
            if (match_right_[v] == kFree || augment(match_right_[v])) {
                match_left_[u] = v;
                match_right_[v] = u;
                return true;
            }
        }
        return false;
    }

    const std::vector<Point>& a_;
    const std::vector<Point>& b_;
    double delta_ = 0.0;
    std::vector<std::size_t> match_left_;
    std::vector<std::size_t> match_right_;
    std::vector<bool> visited_;
};

// Exact bottleneck between finite-death point sets: smallest feasible
// candidate among all pairwise L-infinity distances and all
// point-to-diagonal distances.
double finite_bottleneck(const std::vector<Point>& a, const std::vector<Point>& b) {
    if (a.empty() && b.empty()) return 0.0;
    std::vector<double> candidates = {0.0};
    for (const Point& p : a) candidates.push_back(p.diag());
    for (const Point& p : b) candidates.push_back(p.diag());
    for (const Point& p : a)
        for (const Point& q : b) candidates.push_back(linf(p, q));
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    Matcher matcher(a, b);
    std::size_t lo = 0, hi = candidates.size() - 1;
    if (!matcher.feasible(candidates[hi]))
        throw std::logic_error("bottleneck: no feasible threshold");  // cannot happen
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (matcher.feasible(candidates[mid]))
            hi = mid;
        else
            lo = mid + 1;
    }
    return candidates[lo];
}

// Essential classes pair among themselves; the max birth gap of the
// sorted matching is optimal for the min-max objective on a line.
double essential_bottleneck(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

}  // namespace

BottleneckResult bottleneck(const PersistenceDiagram& a, const PersistenceDiagram& b, int dim) {
    if (dim != 0 && dim != 1) throw std::invalid_argument("dimension must be 0 or 1");

    std::vector<Point> finite_a, finite_b;
    std::vector<double> essential_a, essential_b;
    auto split = [dim](const PersistenceDiagram& d, std::vector<Point>& finite,
                       std::vector<double>& essential) {
        for (const Bar& bar : d.bars) {
            if (bar.dim != dim) continue;
            if (bar.essential())
                essential.push_back(bar.birth);
            else if (bar.death > bar.birth)  // on-diagonal points match at zero cost
                finite.push_back({bar.birth, bar.death});
        }
    };
    split(a, finite_a, essential_a);
    split(b, finite_b, essential_b);

    if (essential_a.size() != essential_b.size())
        return {std::numeric_limits<double>::infinity(), true};

    const double finite_part = finite_bottleneck(finite_a, finite_b);
    const double essential_part = essential_bottleneck(std::move(essential_a),
                                                       std::move(essential_b));
    return {std::max(finite_part, essential_part), false};
}

}  // namespace topogait
