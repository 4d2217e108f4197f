#include "crm/image/segmentation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numbers>
#include <queue>
#include <stdexcept>
#include <tuple>

#include "crm/coding/byte_io.hpp"
#include "crm/coding/frequency_model.hpp"
#include "crm/coding/gaussian.hpp"
#include "crm/coding/range_coder.hpp"
#include "crm/error.hpp"
#include "crm/image/pixel_diff.hpp"

namespace crm::image {

namespace {

constexpr double kLog2E = std::numbers::log2e;

coding::StaticFrequencyModel pixel_model(RegionParams p) {
  const double sigma = p.sigma();
  return coding::StaticFrequencyModel::from_weights(coding::discretized_gaussian(p.mean(), sigma * sigma, 0, 255));
}

// ---- crack graph -----------------------------------------------------------
//
// Lattice vertices are (x, y) with 0 <= x <= width, 0 <= y <= height.
// Horizontal edge h(x, y) joins (x, y)-(x+1, y) and separates pixel (x, y-1)
// from (x, y); vertical edge v(x, y) joins (x, y)-(x, y+1) and separates
// pixel (x-1, y) from (x, y). Only interior edges can be cracks.

enum Dir : int { kEast = 0, kSouth = 1, kWest = 2, kNorth = 3 };
enum Move : std::uint32_t { kStraight = 0, kLeft = 1, kRight = 2, kStop = 3 };

class CrackGraph {
 public:
  CrackGraph(int width, int height)
      : w_(width), h_(height),
        horiz_(static_cast<std::size_t>(width) * (height + 1), 0),
        vert_(static_cast<std::size_t>(width + 1) * height, 0) {}

  static CrackGraph from_map(int width, int height, std::span<const std::uint32_t> map) {
    CrackGraph g(width, height);
    for (int y = 0; y < height; ++y) {
      for (int x = 0; x < width; ++x) {
        const auto here = map[static_cast<std::size_t>(y) * width + x];
        if (x > 0 && map[static_cast<std::size_t>(y) * width + x - 1] != here) g.vert_[g.vidx(x, y)] = 1;
        if (y > 0 && map[static_cast<std::size_t>(y - 1) * width + x] != here) g.horiz_[g.hidx(x, y)] = 1;
      }
    }
    return g;
  }

  [[nodiscard]] int vertex_count() const { return (w_ + 1) * (h_ + 1); }

  // Edge leaving vertex (x, y) in direction d; nullptr when off-lattice or
  // on the image border.
  std::uint8_t* edge(int x, int y, int d) {
    switch (d) {
      case kEast: return (y > 0 && y < h_ && x < w_) ? &horiz_[hidx(x, y)] : nullptr;
      case kWest: return (y > 0 && y < h_ && x > 0) ? &horiz_[hidx(x - 1, y)] : nullptr;
      case kSouth: return (x > 0 && x < w_ && y < h_) ? &vert_[vidx(x, y)] : nullptr;
      case kNorth: return (x > 0 && x < w_ && y > 0) ? &vert_[vidx(x, y - 1)] : nullptr;
      default: return nullptr;
    }
  }

  int degree(int x, int y) {
    int n = 0;
    for (int d = 0; d < 4; ++d) {
      auto* e = edge(x, y, d);
      n += (e && *e) ? 1 : 0;
    }
    return n;
  }

  // Whether pixels (x, y) and its neighbour in direction d are separated.
  [[nodiscard]] bool separated(int x, int y, int d) const {
    switch (d) {
      case kEast: return vert_[vidx(x + 1, y)] != 0;
      case kWest: return vert_[vidx(x, y)] != 0;
      case kSouth: return horiz_[hidx(x, y + 1)] != 0;
      case kNorth: return horiz_[hidx(x, y)] != 0;
      default: return true;
    }
  }

  // Dense labels of the 4-connected components, numbered by first pixel in
  // raster order.
  [[nodiscard]] std::vector<std::uint32_t> label_components(std::uint32_t& count) const {
    constexpr std::uint32_t kUnset = UINT32_MAX;
    std::vector<std::uint32_t> labels(static_cast<std::size_t>(w_) * h_, kUnset);
    std::vector<std::pair<int, int>> stack;
    count = 0;
    for (int y = 0; y < h_; ++y) {
      for (int x = 0; x < w_; ++x) {
        if (labels[static_cast<std::size_t>(y) * w_ + x] != kUnset) continue;
        const std::uint32_t label = count++;
        labels[static_cast<std::size_t>(y) * w_ + x] = label;
        stack.assign(1, {x, y});
        while (!stack.empty()) {
          auto [cx, cy] = stack.back();
          stack.pop_back();
          static constexpr int dx[4] = {1, 0, -1, 0};
          static constexpr int dy[4] = {0, 1, 0, -1};
          for (int d = 0; d < 4; ++d) {
            const int nx = cx + dx[d], ny = cy + dy[d];
            if (nx < 0 || ny < 0 || nx >= w_ || ny >= h_ || separated(cx, cy, d)) continue;
            auto& l = labels[static_cast<std::size_t>(ny) * w_ + nx];
            if (l == kUnset) {
              l = label;
              stack.emplace_back(nx, ny);
            }
          }
        }
      }
    }
    return labels;
  }

 private:
  [[nodiscard]] std::size_t hidx(int x, int y) const { return static_cast<std::size_t>(y) * w_ + x; }
  [[nodiscard]] std::size_t vidx(int x, int y) const { return static_cast<std::size_t>(y) * (w_ + 1) + x; }

  int w_, h_;
  std::vector<std::uint8_t> horiz_, vert_;
};

constexpr int kStepX[4] = {1, 0, -1, 0};
constexpr int kStepY[4] = {0, 1, 0, -1};

// Positive counts: 5-bit length then the bits below the leading one.
void encode_count(coding::RangeEncoder& enc, std::uint32_t v) {
  const auto n = static_cast<unsigned>(std::bit_width(v));
  enc.encode_bits(n - 1, 5);
  if (n > 1) enc.encode_bits(v - (1u << (n - 1)), n - 1);
}

std::uint32_t decode_count(coding::RangeDecoder& dec) {
  const unsigned n = dec.decode_bits(5) + 1;
  return n > 1 ? (1u << (n - 1)) + dec.decode_bits(n - 1) : 1u;
}

unsigned vertex_bits(int vertex_count) {
  return static_cast<unsigned>(std::bit_width(static_cast<std::uint32_t>(vertex_count - 1)));
}

// Chain code: count, then per chain a start vertex, an absolute first
// direction and 2-bit relative moves ending with kStop. Odd-degree vertices
// start chains first so paths run between junctions.
void encode_chains(coding::RangeEncoder& enc, CrackGraph graph, int width, int height) {
  struct Chain {
    int start;
    int dir;
    std::vector<std::uint32_t> moves;
  };
  std::vector<Chain> chains;
  const int stride = width + 1;
  const int vcount = graph.vertex_count();

  auto trace_from = [&](int v) {
    int x = v % stride, y = v / stride;
    Chain c{v, -1, {}};
    for (int d = 0; d < 4; ++d) {
      auto* e = graph.edge(x, y, d);
      if (e && *e) {
        c.dir = d;
        break;
      }
    }
    int heading = c.dir;
    *graph.edge(x, y, heading) = 0;
    x += kStepX[heading];
    y += kStepY[heading];
    for (;;) {
      bool moved = false;
      for (std::uint32_t m : {kStraight, kLeft, kRight}) {
        const int d = m == kStraight ? heading : (m == kLeft ? (heading + 3) % 4 : (heading + 1) % 4);
        auto* e = graph.edge(x, y, d);
        if (e && *e) {
          *e = 0;
          c.moves.push_back(m);
          heading = d;
          x += kStepX[d];
          y += kStepY[d];
          moved = true;
          break;
        }
      }
      if (!moved) break;
    }
    c.moves.push_back(kStop);
    chains.push_back(std::move(c));
  };

  for (int v = 0; v < vcount; ++v) {
    while (graph.degree(v % stride, v / stride) % 2 == 1) trace_from(v);
  }
  for (int v = 0; v < vcount; ++v) {
    while (graph.degree(v % stride, v / stride) > 0) trace_from(v);
  }

  const unsigned vbits = vertex_bits(vcount);
  encode_count(enc, static_cast<std::uint32_t>(chains.size()) + 1);
  for (const auto& c : chains) {
    enc.encode_bits(static_cast<std::uint32_t>(c.start), vbits);
    enc.encode_bits(static_cast<std::uint32_t>(c.dir), 2);
    for (auto m : c.moves) enc.encode_bits(m, 2);
  }
  (void)height;
}

CrackGraph decode_chains(coding::RangeDecoder& dec, int width, int height) {
  CrackGraph graph(width, height);
  const int stride = width + 1;
  const int vcount = graph.vertex_count();
  const unsigned vbits = vertex_bits(vcount);
  const std::uint32_t chain_count = decode_count(dec) - 1;
  // Each chain uses at least one of the interior edges.
  const std::uint64_t max_edges = 2ull * width * height;
  if (chain_count > max_edges) throw DecodeError("too many boundary chains");
  auto take = [&](int x, int y, int d) {
    auto* e = graph.edge(x, y, d);
    if (!e || *e) throw DecodeError("boundary chain leaves the interior lattice");
    *e = 1;
  };
  for (std::uint32_t i = 0; i < chain_count; ++i) {
    const auto start = dec.decode_bits(vbits);
    if (start >= static_cast<std::uint32_t>(vcount)) throw DecodeError("chain start out of range");
    int x = static_cast<int>(start) % stride, y = static_cast<int>(start) / stride;
    int heading = static_cast<int>(dec.decode_bits(2));
    take(x, y, heading);
    x += kStepX[heading];
    y += kStepY[heading];
    for (std::uint64_t steps = 0;; ++steps) {
      if (steps > max_edges) throw DecodeError("unterminated boundary chain");
      const auto m = dec.decode_bits(2);
      if (m == kStop) break;
      heading = m == kStraight ? heading : (m == kLeft ? (heading + 3) % 4 : (heading + 1) % 4);
      take(x, y, heading);
      x += kStepX[heading];
      y += kStepY[heading];
    }
  }
  return graph;
}

// ---- greedy merging -------------------------------------------------------

struct Region {
  Histogram hist{};
  std::uint64_t count = 0;
  double bits = 0.0;
  std::map<std::uint32_t, std::uint32_t> neighbors;  // region -> shared cracks
  std::uint32_t version = 0;
  bool alive = true;
};

Histogram merged(const Histogram& a, const Histogram& b) {
  Histogram h;
  for (std::size_t i = 0; i < h.size(); ++i) h[i] = a[i] + b[i];
  return h;
}

double fitted_bits(const Histogram& h) { return region_pixel_bits(h, fit_region_params(h)); }

struct Candidate {
  double delta;
  std::uint32_t a, b;
  std::uint32_t va, vb;
  // Max-heap on "better": lower delta, then lower (a, b).
  bool operator<(const Candidate& o) const {
    if (delta != o.delta) return delta > o.delta;
    return std::tie(a, b) > std::tie(o.a, o.b);
  }
};


// Cost of a dense map under freshly fitted parameters.
double map_cost(const Image& img, const std::vector<std::uint32_t>& map, std::uint32_t count, double mu,
                double lambda) {
  std::vector<Histogram> hists(count, Histogram{});
  for (std::size_t i = 0; i < map.size(); ++i) ++hists[map[i]][img.pixels()[i]];
  double bits = 0.0;
  for (const auto& h : hists) bits += fitted_bits(h) + lambda;
  std::size_t cracks = 0;
  const int w = img.width();
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (i % w > 0 && map[i - 1] != map[i]) ++cracks;
    if (i >= static_cast<std::size_t>(w) && map[i - w] != map[i]) ++cracks;
  }
  return bits + mu * static_cast<double>(cracks);
}

std::uint32_t densify(std::vector<std::uint32_t>& map, std::size_t labels) {
  std::vector<std::uint32_t> dense(labels, UINT32_MAX);
  std::uint32_t next = 0;
  for (auto& l : map) {
    if (dense[l] == UINT32_MAX) dense[l] = next++;
    l = dense[l];
  }
  return next;
}

// Whether taking pixel (x, y) out of its region keeps the region 4-connected:
// its 4-neighbours in the region must lie on one run of region pixels around
// the 3x3 ring.
bool removable(const std::vector<std::uint32_t>& map, int w, int h, int x, int y) {
  static constexpr std::array<std::array<int, 2>, 8> kRing{
      {{0, -1}, {1, -1}, {1, 0}, {1, 1}, {0, 1}, {-1, 1}, {-1, 0}, {-1, -1}}};
  const auto label = map[static_cast<std::size_t>(y) * w + x];
  std::array<bool, 8> in{};
  for (std::size_t k = 0; k < 8; ++k) {
    const int nx = x + kRing[k][0], ny = y + kRing[k][1];
    in[k] = nx >= 0 && ny >= 0 && nx < w && ny < h && map[static_cast<std::size_t>(ny) * w + nx] == label;
  }
  // Runs start where a region cell follows a non-region cell.
  int runs = 0;
  for (std::size_t k = 0; k < 8; ++k) runs += in[k] && !in[(k + 7) % 8];
  if (runs <= 1) return true;
  // Several runs are fine as long as only one of them touches p's sides.
  int touching = 0;
  for (std::size_t k = 0; k < 8; ++k) {
    if (!in[k] || in[(k + 7) % 8]) continue;
    bool side = false;
    for (std::size_t j = k; in[j % 8] && j < k + 8; ++j) side |= j % 2 == 0;
    touching += side;
  }
  return touching <= 1;
}

// One sweep of single-pixel moves across region boundaries with the
// parameters held fixed. Returns the number of moves.
std::size_t refine_sweep(const Image& img, std::vector<std::uint32_t>& map, std::uint32_t count, double mu,
                         double lambda) {
  const int w = img.width(), h = img.height();
  std::vector<Histogram> hists(count, Histogram{});
  std::vector<std::uint64_t> sizes(count, 0);
  for (std::size_t i = 0; i < map.size(); ++i) {
    ++hists[map[i]][img.pixels()[i]];
    ++sizes[map[i]];
  }
  std::vector<std::array<double, 256>> table(count);
  for (std::uint32_t r = 0; r < count; ++r) {
    const auto p = fit_region_params(hists[r]);
    const double mean = p.mean(), var = p.sigma() * p.sigma();
    const double log2z = coding::gaussian_log2_normalizer(mean, var, 0, 255);
    for (int v = 0; v < 256; ++v) table[r][v] = (v - mean) * (v - mean) * kLog2E / (2.0 * var) + log2z;
  }
  std::size_t moves = 0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const auto i = static_cast<std::size_t>(y) * w + x;
      const auto a = map[i];
      std::array<std::uint32_t, 4> nb{};
      int n = 0;
      if (x > 0) nb[n++] = map[i - 1];
      if (x + 1 < w) nb[n++] = map[i + 1];
      if (y > 0) nb[n++] = map[i - w];
      if (y + 1 < h) nb[n++] = map[i + w];
      const auto differing = [&](std::uint32_t label) {
        int c = 0;
        for (int k = 0; k < n; ++k) c += nb[k] != label;
        return c;
      };
      const int cracks_a = differing(a);
      if (cracks_a == 0) continue;
      if (sizes[a] > 1 && !removable(map, w, h, x, y)) continue;
      const auto v = img.pixels()[i];
      double best = -1e-9;
      std::uint32_t to = a;
      for (int k = 0; k < n; ++k) {
        const auto b = nb[k];
        if (b == a) continue;
        double delta = table[b][v] - table[a][v] + mu * (differing(b) - cracks_a);
        if (sizes[a] == 1) delta -= lambda;
        if (delta < best || (delta == best && b < to)) {
          best = delta;
          to = b;
        }
      }
      if (to == a) continue;
      map[i] = to;
      --sizes[a];
      ++sizes[to];
      ++moves;
    }
  }
  return moves;
}

// Greedy merging of adjacent regions of a dense map; returns the new region
// count and updates `cost`.
std::uint32_t greedy_merge(const Image& img, std::vector<std::uint32_t>& map, std::uint32_t count, double mu,
                           double lambda, double& cost, std::vector<double>* cost_trace) {
  const int w = img.width();
  std::vector<Region> regions(count);
  for (std::size_t i = 0; i < map.size(); ++i) {
    const auto label = map[i];
    ++regions[label].hist[img.pixels()[i]];
    ++regions[label].count;
    if (i % w > 0 && map[i - 1] != label) {
      ++regions[label].neighbors[map[i - 1]];
      ++regions[map[i - 1]].neighbors[label];
    }
    if (i >= static_cast<std::size_t>(w) && map[i - w] != label) {
      ++regions[label].neighbors[map[i - w]];
      ++regions[map[i - w]].neighbors[label];
    }
  }
  for (auto& r : regions) r.bits = fitted_bits(r.hist);

  auto delta_of = [&](std::uint32_t a, std::uint32_t b, double* merged_bits) {
    const double mb = fitted_bits(merged(regions[a].hist, regions[b].hist));
    if (merged_bits) *merged_bits = mb;
    return mb - regions[a].bits - regions[b].bits - lambda - mu * regions[a].neighbors.at(b);
  };

  std::priority_queue<Candidate> queue;
  auto push_pair = [&](std::uint32_t a, std::uint32_t b) {
    if (a > b) std::swap(a, b);
    queue.push({delta_of(a, b, nullptr), a, b, regions[a].version, regions[b].version});
  };
  for (std::uint32_t a = 0; a < regions.size(); ++a)
    for (auto& [b, c] : regions[a].neighbors)
      if (a < b) push_pair(a, b);

  std::vector<std::uint32_t> parent(regions.size());
  for (std::uint32_t i = 0; i < parent.size(); ++i) parent[i] = i;

  while (!queue.empty()) {
    const Candidate c = queue.top();
    queue.pop();
    auto& ra = regions[c.a];
    auto& rb = regions[c.b];
    if (!ra.alive || !rb.alive || ra.version != c.va || rb.version != c.vb) continue;
    if (!(c.delta < 0.0)) break;

    double mb = 0.0;
    const double delta = delta_of(c.a, c.b, &mb);
    ra.hist = merged(ra.hist, rb.hist);
    ra.count += rb.count;
    ra.bits = mb;
    ra.neighbors.erase(c.b);
    for (auto& [n, shared] : rb.neighbors) {
      if (n == c.a) continue;
      ra.neighbors[n] += shared;
      auto& nn = regions[n].neighbors;
      nn.erase(c.b);
      nn[c.a] += shared;
    }
    rb.neighbors.clear();
    rb.alive = false;
    ++ra.version;
    parent[c.b] = c.a;
    cost += delta;
    if (cost_trace) cost_trace->push_back(cost);
    for (auto& [n, shared] : ra.neighbors) push_pair(c.a, n);
  }

  auto root = [&](std::uint32_t x) {
    while (parent[x] != x) x = parent[x];
    return x;
  };
  for (auto& l : map) l = root(l);
  // Dense labels in raster order of first appearance.
  return densify(map, regions.size());
}

}  // namespace

RegionParams fit_region_params(const Histogram& hist) {
  double n = 0.0, sum = 0.0;
  for (int v = 0; v < 256; ++v) {
    n += hist[v];
    sum += static_cast<double>(hist[v]) * v;
  }
  if (n == 0.0) throw std::invalid_argument("empty region");
  const double mean = sum / n;
  double ss = 0.0;
  for (int v = 0; v < 256; ++v) ss += hist[v] * (v - mean) * (v - mean);
  const double sigma = std::max(std::sqrt(ss / n), kSigmaFloorQ / 256.0);
  RegionParams p;
  p.mean_q = static_cast<std::uint16_t>(std::clamp(std::lround(mean * 256.0), 0L, 65535L));
  p.sigma_q = static_cast<std::uint16_t>(std::clamp(std::lround(sigma * 256.0), static_cast<long>(kSigmaFloorQ), 65535L));
  return p;
}

double region_pixel_bits(const Histogram& hist, RegionParams params) {
  if (params.sigma_q < kSigmaFloorQ) throw std::invalid_argument("sigma below quantization floor");
  const double mean = params.mean();
  const double var = params.sigma() * params.sigma();
  const double log2z = coding::gaussian_log2_normalizer(mean, var, 0, 255);
  double bits = 0.0;
  for (int v = 0; v < 256; ++v) {
    if (hist[v] == 0) continue;
    const double d = v - mean;
    bits += hist[v] * (d * d * kLog2E / (2.0 * var) + log2z);
  }
  return bits;
}

Segmentation make_segmentation(const Image& img, std::vector<std::uint32_t> region_map) {
  if (region_map.size() != img.size()) throw std::invalid_argument("region map size mismatch");
  std::uint32_t m = 0;
  for (auto l : region_map) m = std::max(m, l + 1);
  std::vector<Histogram> hists(m, Histogram{});
  for (std::size_t i = 0; i < region_map.size(); ++i) ++hists[region_map[i]][img.pixels()[i]];
  Segmentation seg{img.width(), img.height(), std::move(region_map), m, {}};
  seg.params.reserve(m);
  for (const auto& h : hists) seg.params.push_back(fit_region_params(h));
  validate_segmentation(seg, img);
  return seg;
}

void validate_segmentation(const Segmentation& seg, const Image& img) {
  if (seg.width != img.width() || seg.height != img.height() || seg.region_map.size() != img.size())
    throw std::invalid_argument("segmentation does not match image dimensions");
  if (seg.region_count == 0 || seg.params.size() != seg.region_count)
    throw std::invalid_argument("region parameter count mismatch");
  std::vector<std::uint64_t> sizes(seg.region_count, 0);
  for (auto l : seg.region_map) {
    if (l >= seg.region_count) throw std::invalid_argument("region index out of range");
    ++sizes[l];
  }
  for (auto s : sizes)
    if (s < 1) throw std::invalid_argument("region with fewer than 1 pixel");
  for (const auto& p : seg.params)
    if (p.sigma_q < kSigmaFloorQ) throw std::invalid_argument("sigma below quantization floor");
  // Connectivity: components of the crack graph must equal the regions.
  std::uint32_t components = 0;
  (void)CrackGraph::from_map(seg.width, seg.height, seg.region_map).label_components(components);
  if (components != seg.region_count) throw std::invalid_argument("region is not 4-connected");
}

std::size_t count_internal_cracks(const Segmentation& seg) {
  std::size_t cracks = 0;
  const auto& map = seg.region_map;
  for (int y = 0; y < seg.height; ++y) {
    for (int x = 0; x < seg.width; ++x) {
      const auto i = static_cast<std::size_t>(y) * seg.width + x;
      if (x > 0 && map[i - 1] != map[i]) ++cracks;
      if (y > 0 && map[i - seg.width] != map[i]) ++cracks;
    }
  }
  return cracks;
}

coding::CodeLengthBits segmentation_cost(const Image& img, const Segmentation& seg, double mu, double lambda) {
  validate_segmentation(seg, img);
  if (mu < 0.0 || lambda < 0.0) throw std::invalid_argument("mu and lambda must be non-negative");
  std::vector<Histogram> hists(seg.region_count, Histogram{});
  for (std::size_t i = 0; i < seg.region_map.size(); ++i) ++hists[seg.region_map[i]][img.pixels()[i]];
  double bits = 0.0;
  for (std::uint32_t r = 0; r < seg.region_count; ++r) bits += region_pixel_bits(hists[r], seg.params[r]) + lambda;
  // (mu/2) per crack for each of its two regions.
  bits += mu * static_cast<double>(count_internal_cracks(seg));
  return coding::CodeLengthBits(bits);
}

Segmentation segment_mdl(const Image& img, double mu, double lambda, std::vector<double>* cost_trace) {
  if (mu < 0.0 || lambda < 0.0) throw std::invalid_argument("mu and lambda must be non-negative");
  const int w = img.width();
  const int bw = (w + kInitialBlock - 1) / kInitialBlock;
  std::vector<std::uint32_t> map(img.size());
  for (std::size_t i = 0; i < map.size(); ++i) {
    const auto x = static_cast<int>(i % w), y = static_cast<int>(i / w);
    map[i] = static_cast<std::uint32_t>((y / kInitialBlock) * bw + x / kInitialBlock);
  }
  auto count = densify(map, map.size());
  double cost = map_cost(img, map, count, mu, lambda);
  if (cost_trace) cost_trace->assign(1, cost);

  // Block corners cannot follow edges that cut through a block, so merging
  // alternates with sweeps that move boundary pixels one at a time.
  for (int pass = 0;; ++pass) {
    count = greedy_merge(img, map, count, mu, lambda, cost, cost_trace);
    if (pass == kMaxRefinePasses) break;
    auto trial = map;
    if (refine_sweep(img, trial, count, mu, lambda) == 0) break;
    const auto trial_count = densify(trial, count);
    const double trial_cost = map_cost(img, trial, trial_count, mu, lambda);
    if (!(trial_cost < cost)) break;
    map = std::move(trial);
    count = trial_count;
    cost = trial_cost;
    if (cost_trace) cost_trace->push_back(cost);
  }
  return make_segmentation(img, std::move(map));
}

std::vector<std::uint8_t> encode_segmented_body(const Image& img, const Segmentation& seg) {
  validate_segmentation(seg, img);
  const auto graph = CrackGraph::from_map(seg.width, seg.height, seg.region_map);
  // Regions are written in the order the decoder rediscovers them.
  std::uint32_t components = 0;
  const auto canonical = graph.label_components(components);
  std::vector<std::uint32_t> to_canonical(seg.region_count, UINT32_MAX);
  for (std::size_t i = 0; i < canonical.size(); ++i) to_canonical[seg.region_map[i]] = canonical[i];
  std::vector<RegionParams> params(seg.region_count);
  std::vector<std::uint32_t> sizes(seg.region_count, 0);
  for (std::uint32_t r = 0; r < seg.region_count; ++r) params[to_canonical[r]] = seg.params[r];
  for (auto l : canonical) ++sizes[l];

  coding::RangeEncoder enc;
  encode_count(enc, seg.region_count);
  for (std::uint32_t r = 0; r < seg.region_count; ++r) {
    enc.encode_bits(params[r].mean_q, 16);
    enc.encode_bits(params[r].sigma_q, 16);
    enc.encode_bits(sizes[r], 32);
  }
  encode_chains(enc, graph, seg.width, seg.height);
  std::vector<coding::StaticFrequencyModel> models;
  models.reserve(params.size());
  for (const auto& p : params) models.push_back(pixel_model(p));
  for (std::size_t i = 0; i < canonical.size(); ++i) enc.encode_symbol(models[canonical[i]], img.pixels()[i]);
  return enc.finish();
}

Image decode_segmented_body(std::span<const std::uint8_t> body, int width, int height, Segmentation* seg_out) {
  coding::RangeDecoder dec(body);
  const std::uint32_t m = decode_count(dec);
  const auto pixels = static_cast<std::uint64_t>(width) * height;
  if (m == 0 || m > pixels) throw DecodeError("invalid region count");
  std::vector<RegionParams> params(m);
  std::vector<std::uint32_t> sizes(m);
  for (std::uint32_t r = 0; r < m; ++r) {
    params[r].mean_q = static_cast<std::uint16_t>(dec.decode_bits(16));
    params[r].sigma_q = static_cast<std::uint16_t>(dec.decode_bits(16));
    sizes[r] = dec.decode_bits(32);
    if (params[r].sigma_q < kSigmaFloorQ) throw DecodeError("region sigma below floor");
  }
  const auto graph = decode_chains(dec, width, height);
  std::uint32_t components = 0;
  auto labels = graph.label_components(components);
  if (components != m) throw DecodeError("boundary chains disagree with region count");
  std::vector<std::uint32_t> counted(m, 0);
  for (auto l : labels) ++counted[l];
  if (counted != sizes) throw DecodeError("region sizes disagree with boundary chains");

  std::vector<coding::StaticFrequencyModel> models;
  models.reserve(m);
  for (const auto& p : params) models.push_back(pixel_model(p));
  Image img(width, height);
  for (std::size_t i = 0; i < labels.size(); ++i)
    img.pixels()[i] = static_cast<std::uint8_t>(dec.decode_symbol(models[labels[i]]));
  dec.finish();
  if (seg_out) *seg_out = Segmentation{width, height, std::move(labels), m, std::move(params)};
  return img;
}

std::vector<std::uint8_t> compress_image_segmented(const Image& img) {
  const auto seg = segment_mdl(img);
  auto regions = encode_segmented_body(img, seg);
  auto intra = encode_intra(img);
  coding::ByteWriter w;
  if (regions.size() < intra.body.size()) {
    w.put_u8(static_cast<std::uint8_t>(SegmentedMode::kRegions));
  } else {
    w.put_u8(static_cast<std::uint8_t>(intra.mode == IntraMode::kRaw ? SegmentedMode::kRaw : SegmentedMode::kResidual));
  }
  w.put_varint(static_cast<std::uint64_t>(img.width()));
  w.put_varint(static_cast<std::uint64_t>(img.height()));
  w.put_bytes(regions.size() < intra.body.size() ? regions : intra.body);
  return std::move(w).take();
}

Image decompress_image_segmented(std::span<const std::uint8_t> stream) {
  coding::ByteReader r(stream);
  const auto mode = r.get_u8();
  const auto width = r.get_varint();
  const auto height = r.get_varint();
  if (width == 0 || height == 0 || width > (1u << 20) || height > (1u << 20))
    throw DecodeError("invalid image dimensions");
  auto body = r.get_bytes(r.remaining());
  switch (static_cast<SegmentedMode>(mode)) {
    case SegmentedMode::kRegions:
      return decode_segmented_body(body, static_cast<int>(width), static_cast<int>(height));
    case SegmentedMode::kResidual:
      return decode_intra(IntraMode::kResidual, body, static_cast<int>(width), static_cast<int>(height));
    case SegmentedMode::kRaw:
      return decode_intra(IntraMode::kRaw, body, static_cast<int>(width), static_cast<int>(height));
  }
  throw DecodeError("unknown segmented mode");
}

}  // namespace crm::image
