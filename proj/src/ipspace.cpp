#include "ipspace.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "geodesic.hpp"

namespace horizon::ipspace {

CellSet& CellSet::operator|=(const CellSet& o) {
  for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= o.words_[k];
  return *this;
}

CellSet& CellSet::operator&=(const CellSet& o) {
  for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= o.words_[k];
  return *this;
}

CellSet& CellSet::operator^=(const CellSet& o) {
  for (std::size_t k = 0; k < words_.size(); ++k) words_[k] ^= o.words_[k];
  return *this;
}

CellSet CellSet::and_not(const CellSet& o) const {
  CellSet r(bits_);
  for (std::size_t k = 0; k < words_.size(); ++k) r.words_[k] = words_[k] & ~o.words_[k];
  return r;
}

bool CellSet::any() const {
  for (uint64_t w : words_)
    if (w) return true;
  return false;
}

int CellSet::count() const {
  int c = 0;
  for (uint64_t w : words_) c += std::popcount(w);
  return c;
}

bool CellSet::intersects(const CellSet& o) const {
  for (std::size_t k = 0; k < words_.size(); ++k)
    if (words_[k] & o.words_[k]) return true;
  return false;
}

bool CellSet::is_subset_of(const CellSet& o) const {
  for (std::size_t k = 0; k < words_.size(); ++k)
    if (words_[k] & ~o.words_[k]) return false;
  return true;
}

int CellSet::count_range(int begin, int end) const {
  int c = 0;
  for (int w = begin >> 6; w <= (end - 1) >> 6 && w < int(words_.size()); ++w) {
    uint64_t word = words_[w];
    int lo = w << 6, hi = lo + 64;
    if (begin > lo) word &= ~uint64_t(0) << (begin - lo);
    if (end < hi) word &= ~uint64_t(0) >> (hi - end);
    c += std::popcount(word);
  }
  return c;
}

void CellSet::for_each(const std::function<void(int)>& fn) const {
  for (std::size_t w = 0; w < words_.size(); ++w) {
    uint64_t word = words_[w];
    while (word) {
      int b = std::countr_zero(word);
      fn(int(w << 6) + b);
      word &= word - 1;
    }
  }
}

CellSet CausalGrid::full_set() const {
  CellSet s(cell_count());
  for (int c = 0; c < cell_count(); ++c) s.set(c);
  return s;
}

bool CausalGrid::chron(int a, int b) const {
  int dt = layer_of(b) - layer_of(a);
  if (dt <= 0) return false;
  return min_steps_[node_of(a) * slice_nodes_ + node_of(b)] <= dt;
}

CausalGrid build_causal_grid(std::shared_ptr<const surfaces::MetricGrid> slice,
                             int time_count, double time_step) {
  if (time_count < 2) fail(ErrorCode::InvalidParameter, "time_count must be >= 2");
  if (!(time_step > 0.0)) fail(ErrorCode::InvalidParameter, "time_step must be positive");

  CausalGrid g;
  g.slice_ = slice;
  g.time_count_ = time_count;
  g.time_step_ = time_step;
  g.slice_nodes_ = slice->node_count();
  int n = g.slice_nodes_;

  // All-pairs slice distances (one exact field per source).
  g.slice_dist_.assign(std::size_t(n) * n, 0.0);
  parallel_for(std::size_t(n), [&](std::size_t x) {
    geodesic::DistanceField f =
        geodesic::distance_field(slice, slice->node(int(x)));
    for (int y = 0; y < n; ++y) g.slice_dist_[x * n + y] = f.values[y];
  });

  // Minimal layer gap making (t, x) << (t + k, y): strict light-cone with the
  // stencil-error slack.
  double eb = slice->error_bound();
  g.min_steps_.assign(std::size_t(n) * n, 0);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      double lhs = g.slice_dist_[std::size_t(x) * n + y] * (1.0 + eb);
      int k = int(std::floor(lhs / time_step)) + 1;
      g.min_steps_[std::size_t(x) * n + y] = k;
    }

  // Per-cell past/future bitsets.
  int cells = g.cell_count();
  g.past_.assign(cells, CellSet(cells));
  g.future_.assign(cells, CellSet(cells));
  parallel_for(std::size_t(cells), [&](std::size_t c) {
    int t = g.layer_of(int(c)), x = g.node_of(int(c));
    CellSet& fut = g.future_[c];
    CellSet& pst = g.past_[c];
    for (int y = 0; y < n; ++y) {
      int k = g.min_steps_[std::size_t(x) * n + y];
      for (int tt = t + k; tt < time_count; ++tt) fut.set(g.cell(tt, y));
      for (int tt = t - k; tt >= 0; --tt) pst.set(g.cell(tt, y));
    }
  });

  // Lattice adjacency: one time step or one slice-stencil step.
  g.neighbors_.assign(cells, CellSet(cells));
  for (int c = 0; c < cells; ++c) {
    int t = g.layer_of(c), x = g.node_of(c);
    auto node = slice->node(x);
    if (t > 0) g.neighbors_[c].set(g.cell(t - 1, x));
    if (t + 1 < time_count) g.neighbors_[c].set(g.cell(t + 1, x));
    for (auto [di, dj] : slice->offsets()) {
      surfaces::GridNode nb;
      if (slice->neighbor(node.i, node.j, di, dj, &nb))
        g.neighbors_[c].set(g.cell(t, slice->index(nb)));
    }
  }

  // Synoptic iff the top layer's pasts cover every lower cell.
  CellSet top_pasts(cells);
  for (int y = 0; y < n; ++y) top_pasts |= g.past_[g.cell(time_count - 1, y)];
  bool syn = true;
  for (int c = 0; c < g.cell(time_count - 1, 0) && syn; ++c)
    if (!top_pasts.test(c)) syn = false;
  g.synoptic_ = syn;
  return g;
}

CellSet past_of(const CausalGrid& g, int cell) { return g.past(cell); }
CellSet future_of(const CausalGrid& g, int cell) { return g.future(cell); }

CellSet tip_of_chain(const CausalGrid& g, const std::vector<int>& chain) {
  if (chain.empty()) fail(ErrorCode::NotAChain, "empty chain");
  for (std::size_t k = 1; k < chain.size(); ++k)
    if (!g.chron(chain[k - 1], chain[k]))
      fail(ErrorCode::NotAChain,
           "chain elements " + std::to_string(k - 1) + ", " + std::to_string(k) +
               " are not chronologically related");
  CellSet u = g.empty_set();
  for (int c : chain) u |= g.past(c);
  return u;
}

bool is_past_set(const CausalGrid& g, const CellSet& a) {
  // Union of the point-pasts contained in A must give back A.
  CellSet probe = g.empty_set();
  for (int c = 0; c < g.cell_count(); ++c)
    if (g.past(c).is_subset_of(a)) probe |= g.past(c);
  return probe == a;
}

bool is_ip(const CausalGrid& g, const CellSet& a) {
  if (a.none()) return false;
  if (!is_past_set(g, a)) return false;
  for (int c = 0; c < g.cell_count(); ++c)
    if (g.past(c) == a) return true;
  return false;
}

CellSet symmetric_difference(const CellSet& a, const CellSet& b) { return a ^ b; }

CellSet joint_future(const CausalGrid& g, const CellSet& q) {
  if (q.none()) return g.full_set();  // intersection over the empty family
  CellSet acc = g.full_set();
  q.for_each([&](int c) { acc &= g.future(c); });
  return acc;
}

WeightField build_weights(const CausalGrid& g, WeightScheme scheme) {
  WeightField w;
  w.slice_nodes = g.slice_nodes();
  int layers = g.time_count();
  w.layer_numerator.resize(layers);
  if (scheme == WeightScheme::Uniform) {
    for (int i = 0; i < layers; ++i) w.layer_numerator[i] = 1;
  } else {
    // Layer i carries mass proportional to 2^-i.
    for (int i = 0; i < layers; ++i) w.layer_numerator[i] = uint64_t(1) << (layers - 1 - i);
  }
  w.total = 0;
  for (int i = 0; i < layers; ++i)
    w.total += w.layer_numerator[i] * uint64_t(g.slice_nodes());
  return w;
}

uint64_t WeightField::numerator(const CellSet& s) const {
  uint64_t acc = 0;
  int layers = int(layer_numerator.size());
  for (int i = 0; i < layers; ++i)
    acc += layer_numerator[i] *
           uint64_t(s.count_range(i * slice_nodes, (i + 1) * slice_nodes));
  return acc;
}

namespace {

// -ln(1 - num/total) evaluated as ln(total) - ln(total - num): monotone in
// the integer numerator and exact at the endpoints.
double neglog1m(uint64_t num, uint64_t total) {
  if (num >= total) return kInf;
  return std::log(double(total)) - std::log(double(total - num));
}

}  // namespace

double delta_metric(const CausalGrid&, const WeightField& w, const CellSet& a,
                    const CellSet& b) {
  return neglog1m(w.numerator(a ^ b), w.total);
}

double d_metric(const CausalGrid& g, const WeightField& w, const CellSet& a,
                const CellSet& b) {
  double first = neglog1m(w.numerator(a ^ b), w.total);
  CellSet ja = joint_future(g, a), jb = joint_future(g, b);
  double second = neglog1m(w.numerator(ja ^ jb), w.total);
  return first + second;
}

double time_t(const CausalGrid& g, const WeightField& w, const TimeFunctionConfig& cfg,
              const CellSet& a) {
  return cfg.h(d_metric(g, w, a, g.full_set()));
}

double time_T(const CausalGrid& g, const WeightField& w, const TimeFunctionConfig& cfg,
              const CellSet& a) {
  return cfg.h(delta_metric(g, w, a, g.full_set()));
}

CellSet future_boundary(const CausalGrid& g, const CellSet& a) {
  if (a.none()) return g.empty_set();
  CellSet closure = g.empty_set();
  CellSet above = g.empty_set();
  a.for_each([&](int c) {
    closure |= g.neighbor_set(c);
    above |= g.future(c);
  });
  // x in closure(A) \ A with past(x) meeting A, i.e. x above some cell of A.
  CellSet out = closure.and_not(a);
  out &= above;
  return out;
}

bool is_achronal(const CausalGrid& g, const CellSet& c) {
  bool ok = true;
  c.for_each([&](int x) {
    if (ok && g.future(x).intersects(c)) ok = false;
  });
  return ok;
}

bool is_causally_convex(const CausalGrid& g, const CellSet& a) {
  // Violated iff some cell outside A lies above part of A and below part of A.
  CellSet above = g.empty_set();
  a.for_each([&](int x) { above |= g.future(x); });
  CellSet candidates = above.and_not(a);
  bool convex = true;
  candidates.for_each([&](int y) {
    if (convex && g.future(y).intersects(a)) convex = false;
  });
  return convex;
}

bool delta_triangle_holds(uint64_t s_ab, uint64_t s_bc, uint64_t s_ac, uint64_t total) {
  // delta(A,C) <= delta(A,B) + delta(B,C)
  //   <=>  total * (total - s_ac) >= (total - s_ab) * (total - s_bc)
  unsigned __int128 lhs = (unsigned __int128)(total) * (total - s_ac);
  unsigned __int128 rhs = (unsigned __int128)(total - s_ab) * (total - s_bc);
  return lhs >= rhs;
}

}  // namespace horizon::ipspace
