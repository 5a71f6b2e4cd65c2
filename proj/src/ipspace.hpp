#ifndef HORIZON_IPSPACE_HPP
#define HORIZON_IPSPACE_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "surfaces.hpp"

namespace horizon::ipspace {

/* Dense bitset over the cells of a causal grid. */
class CellSet {
 public:
  CellSet() = default;
  explicit CellSet(int bits) : bits_(bits), words_((bits + 63) / 64, 0) {}

  int bit_size() const { return bits_; }
  bool test(int i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
  void set(int i) { words_[i >> 6] |= uint64_t(1) << (i & 63); }
  void reset(int i) { words_[i >> 6] &= ~(uint64_t(1) << (i & 63)); }

  CellSet& operator|=(const CellSet& o);
  CellSet& operator&=(const CellSet& o);
  CellSet& operator^=(const CellSet& o);
  CellSet and_not(const CellSet& o) const;

  friend CellSet operator|(CellSet a, const CellSet& b) { return a |= b; }
  friend CellSet operator&(CellSet a, const CellSet& b) { return a &= b; }
  friend CellSet operator^(CellSet a, const CellSet& b) { return a ^= b; }
  bool operator==(const CellSet& o) const { return words_ == o.words_; }

  bool any() const;
  bool none() const { return !any(); }
  int count() const;
  bool intersects(const CellSet& o) const;
  bool is_subset_of(const CellSet& o) const;
  int count_range(int begin, int end) const;  // popcount over [begin, end)

  void for_each(const std::function<void(int)>& fn) const;

  const std::vector<uint64_t>& words() const { return words_; }

 private:
  int bits_ = 0;
  std::vector<uint64_t> words_;
};

/* Discrete standard static spacetime: time layers over a spatial MetricGrid
 * slice, with (t_i, x) << (t_j, y) iff d_slice(x, y)(1 + eb) < (t_j - t_i) dt.
 * The stencil-error slack keeps staircase artifacts out of the relation, and
 * exact graph triangle inequalities make << transitive. */
class CausalGrid {
 public:
  const surfaces::MetricGrid& slice() const { return *slice_; }
  int time_count() const { return time_count_; }
  double time_step() const { return time_step_; }
  int slice_nodes() const { return slice_nodes_; }
  int cell_count() const { return time_count_ * slice_nodes_; }
  bool synoptic() const { return synoptic_; }

  int cell(int t, int node) const { return t * slice_nodes_ + node; }
  int layer_of(int c) const { return c / slice_nodes_; }
  int node_of(int c) const { return c % slice_nodes_; }

  bool chron(int a, int b) const;  // a << b
  const CellSet& past(int c) const { return past_[c]; }
  const CellSet& future(int c) const { return future_[c]; }
  const CellSet& neighbor_set(int c) const { return neighbors_[c]; }

  double slice_distance(int x, int y) const { return slice_dist_[x * slice_nodes_ + y]; }

  CellSet empty_set() const { return CellSet(cell_count()); }
  CellSet full_set() const;

 private:
  friend CausalGrid build_causal_grid(std::shared_ptr<const surfaces::MetricGrid>, int,
                                      double);
  std::shared_ptr<const surfaces::MetricGrid> slice_;
  int time_count_ = 0;
  double time_step_ = 0;
  int slice_nodes_ = 0;
  bool synoptic_ = false;
  std::vector<double> slice_dist_;  // all-pairs slice distances
  std::vector<int> min_steps_;      // minimal layer gap for x << y
  std::vector<CellSet> past_, future_, neighbors_;
};

CausalGrid build_causal_grid(std::shared_ptr<const surfaces::MetricGrid> slice,
                             int time_count, double time_step);

CellSet past_of(const CausalGrid& g, int cell);
CellSet future_of(const CausalGrid& g, int cell);

// Union of the pasts of a chronological chain; errors with NotAChain when
// consecutive elements are unrelated.
CellSet tip_of_chain(const CausalGrid& g, const std::vector<int>& chain);

// Past sets are unions of point-pasts (the discrete counterpart of open past
// sets I^-[S]); IPs are exactly the nonempty pasts of single cells.
bool is_past_set(const CausalGrid& g, const CellSet& a);
bool is_ip(const CausalGrid& g, const CellSet& a);

CellSet symmetric_difference(const CellSet& a, const CellSet& b);
CellSet joint_future(const CausalGrid& g, const CellSet& q);

enum class WeightScheme { Uniform, Layered };

/* Strictly positive cell weights with unit total mass, kept as exact integer
 * numerators over a common total so set masses compare exactly. */
struct WeightField {
  std::vector<uint64_t> layer_numerator;  // weight numerator per time layer
  uint64_t total = 0;
  int slice_nodes = 0;

  uint64_t numerator(const CellSet& s) const;
  double mass(const CellSet& s) const { return double(numerator(s)) / double(total); }
};

WeightField build_weights(const CausalGrid& g, WeightScheme scheme);

// delta(A, B) = -ln(1 - mass(A xor B)); +inf iff the difference carries the
// whole weight.
double delta_metric(const CausalGrid& g, const WeightField& w, const CellSet& a,
                    const CellSet& b);

// d(A, B) = delta(A, B) - ln(1 - mass(joint_future(A) xor joint_future(B))).
double d_metric(const CausalGrid& g, const WeightField& w, const CellSet& a,
                const CellSet& b);

struct TimeFunctionConfig {
  // h decreasing with h(0+) = +inf, h(inf) = -inf; default -ln.
  std::function<double(double)> h = [](double x) { return -std::log(x); };
};

double time_t(const CausalGrid& g, const WeightField& w, const TimeFunctionConfig& cfg,
              const CellSet& a);
double time_T(const CausalGrid& g, const WeightField& w, const TimeFunctionConfig& cfg,
              const CellSet& a);

// Cells adjacent to A (one lattice step), outside A, whose past meets A.
CellSet future_boundary(const CausalGrid& g, const CellSet& a);

bool is_achronal(const CausalGrid& g, const CellSet& c);
bool is_causally_convex(const CausalGrid& g, const CellSet& a);

// Exact integer check of the delta triangle inequality
// delta(A,C) <= delta(A,B) + delta(B,C) given the three difference masses.
bool delta_triangle_holds(uint64_t s_ab, uint64_t s_bc, uint64_t s_ac, uint64_t total);

}  // namespace horizon::ipspace

#endif  // HORIZON_IPSPACE_HPP
