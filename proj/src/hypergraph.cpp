#include "trisim/hypergraph.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

namespace trisim {

Triad make_triad(int a, int b, int c) {
  Triad t{a, b, c};
  std::sort(t.begin(), t.end());
  if (t[0] == t[1] || t[1] == t[2])
    throw std::invalid_argument("triad members must be distinct");
  return t;
}

Edge make_edge(int i, int j) {
  if (i == j) throw std::invalid_argument("edge endpoints must be distinct");
  return i < j ? Edge{i, j} : Edge{j, i};
}

TriadicHypergraph::TriadicHypergraph(int n_agents) : n_(n_agents) {
  if (n_agents < 0) throw std::invalid_argument("negative agent count");
  adj_.resize(static_cast<std::size_t>(n_));
}

bool TriadicHypergraph::has_triad(const Triad& t) const {
  return std::binary_search(triads_.begin(), triads_.end(), t);
}

std::optional<std::size_t> TriadicHypergraph::triad_index(
    const Triad& t) const {
  auto it = std::lower_bound(triads_.begin(), triads_.end(), t);
  if (it == triads_.end() || *it != t) return std::nullopt;
  return static_cast<std::size_t>(it - triads_.begin());
}

void TriadicHypergraph::add_triad(const Triad& t) {
  for (int v : t)
    if (v < 0 || v >= n_) throw std::out_of_range("triad index out of range");
  if (t[0] == t[1] || t[1] == t[2])
    throw std::invalid_argument("triad members must be distinct");
  auto it = std::lower_bound(triads_.begin(), triads_.end(), t);
  if (it != triads_.end() && *it == t)
    throw std::invalid_argument("duplicate triad");
  triads_.insert(it, t);
  add_edges_of(t);
}

void TriadicHypergraph::remove_triad(const Triad& t) {
  auto it = std::lower_bound(triads_.begin(), triads_.end(), t);
  if (it == triads_.end() || *it != t)
    throw std::invalid_argument("triad not active");
  triads_.erase(it);
  remove_edges_of(t);
}

void TriadicHypergraph::add_edges_of(const Triad& t) {
  const Edge es[3] = {make_edge(t[0], t[1]), make_edge(t[0], t[2]),
                      make_edge(t[1], t[2])};
  for (const Edge& e : es) {
    int& cnt = support_[e];
    if (cnt == 0) {
      auto& a = adj_[static_cast<std::size_t>(e.first)];
      a.insert(std::lower_bound(a.begin(), a.end(), e.second), e.second);
      auto& b = adj_[static_cast<std::size_t>(e.second)];
      b.insert(std::lower_bound(b.begin(), b.end(), e.first), e.first);
    }
    ++cnt;
  }
}

void TriadicHypergraph::remove_edges_of(const Triad& t) {
  const Edge es[3] = {make_edge(t[0], t[1]), make_edge(t[0], t[2]),
                      make_edge(t[1], t[2])};
  for (const Edge& e : es) {
    auto it = support_.find(e);
    if (--it->second == 0) {
      support_.erase(it);
      weights_.erase(e);
      auto& a = adj_[static_cast<std::size_t>(e.first)];
      a.erase(std::lower_bound(a.begin(), a.end(), e.second));
      auto& b = adj_[static_cast<std::size_t>(e.second)];
      b.erase(std::lower_bound(b.begin(), b.end(), e.first));
    }
  }
}

std::vector<Edge> TriadicHypergraph::edges() const {
  std::vector<Edge> out;
  out.reserve(support_.size());
  for (const auto& kv : support_) out.push_back(kv.first);
  return out;
}

bool TriadicHypergraph::has_edge(int i, int j) const {
  return support_.count(make_edge(i, j)) > 0;
}

double TriadicHypergraph::weight(int i, int j) const {
  const Edge e = make_edge(i, j);
  if (!support_.count(e)) return 0.0;
  auto it = weights_.find(e);
  return it == weights_.end() ? 1.0 : it->second;
}

void TriadicHypergraph::set_weight(int i, int j, double w) {
  const Edge e = make_edge(i, j);
  if (!support_.count(e))
    throw std::invalid_argument("weight on non-2-section edge");
  if (w < 0) throw std::invalid_argument("negative edge weight");
  weights_[e] = w;
}

const std::vector<int>& TriadicHypergraph::neighbors(int i) const {
  return adj_.at(static_cast<std::size_t>(i));
}

std::vector<std::size_t> TriadicHypergraph::triads_of(int i) const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < triads_.size(); ++k) {
    const Triad& t = triads_[k];
    if (t[0] == i || t[1] == i || t[2] == i) out.push_back(k);
  }
  return out;
}

double TriadicHypergraph::local_density(int i) const {
  if (i < 0 || i >= n_) throw std::out_of_range("agent index");
  if (n_ < 3) return 0.0;
  const double pairs = 0.5 * (n_ - 1) * (n_ - 2);
  return static_cast<double>(triads_of(i).size()) / pairs;
}

double TriadicHypergraph::clustering_coefficient(int i) const {
  if (i < 0 || i >= n_) throw std::out_of_range("agent index");
  const auto mine = triads_of(i);
  if (mine.size() < 2) return 0.0;
  std::size_t sharing = 0, total = 0;
  for (std::size_t a = 0; a < mine.size(); ++a) {
    for (std::size_t b = a + 1; b < mine.size(); ++b) {
      ++total;
      const Triad& ta = triads_[mine[a]];
      const Triad& tb = triads_[mine[b]];
      int overlap = 0;
      for (int u : ta)
        for (int v : tb)
          if (u == v) ++overlap;
      if (overlap == 2) ++sharing;
    }
  }
  return static_cast<double>(sharing) / static_cast<double>(total);
}

std::optional<int> TriadicHypergraph::path_length(int i, int j) const {
  if (i < 0 || i >= n_ || j < 0 || j >= n_)
    throw std::out_of_range("agent index");
  if (i == j) return 0;
  std::vector<int> dist(static_cast<std::size_t>(n_), -1);
  std::deque<int> q{i};
  dist[static_cast<std::size_t>(i)] = 0;
  while (!q.empty()) {
    const int u = q.front();
    q.pop_front();
    for (int v : adj_[static_cast<std::size_t>(u)]) {
      if (dist[static_cast<std::size_t>(v)] < 0) {
        dist[static_cast<std::size_t>(v)] = dist[static_cast<std::size_t>(u)] + 1;
        if (v == j) return dist[static_cast<std::size_t>(v)];
        q.push_back(v);
      }
    }
  }
  return std::nullopt;
}

TriadicHypergraph::GlobalStats TriadicHypergraph::global_stats() const {
  GlobalStats s;
  if (n_ == 0) return s;
  for (int i = 0; i < n_; ++i) {
    s.mean_density += local_density(i);
    s.mean_clustering += clustering_coefficient(i);
  }
  s.mean_density /= n_;
  s.mean_clustering /= n_;
  // Average over reachable ordered pairs via BFS from every node.
  double total = 0;
  std::size_t reachable = 0, unreachable = 0;
  for (int i = 0; i < n_; ++i) {
    std::vector<int> dist(static_cast<std::size_t>(n_), -1);
    std::deque<int> q{i};
    dist[static_cast<std::size_t>(i)] = 0;
    while (!q.empty()) {
      const int u = q.front();
      q.pop_front();
      for (int v : adj_[static_cast<std::size_t>(u)]) {
        if (dist[static_cast<std::size_t>(v)] < 0) {
          dist[static_cast<std::size_t>(v)] =
              dist[static_cast<std::size_t>(u)] + 1;
          q.push_back(v);
        }
      }
    }
    for (int j = 0; j < n_; ++j) {
      if (j == i) continue;
      if (dist[static_cast<std::size_t>(j)] < 0)
        ++unreachable;
      else {
        total += dist[static_cast<std::size_t>(j)];
        ++reachable;
      }
    }
  }
  s.mean_path_length = reachable ? total / static_cast<double>(reachable) : 0.0;
  s.unreachable_pairs = unreachable;
  return s;
}

long TriadicHypergraph::euler_characteristic() const {
  return static_cast<long>(n_) - static_cast<long>(support_.size()) +
         static_cast<long>(triads_.size());
}

std::pair<int, long> TriadicHypergraph::betti01() const {
  std::vector<int> comp(static_cast<std::size_t>(n_), -1);
  int n_comp = 0;
  for (int i = 0; i < n_; ++i) {
    if (comp[static_cast<std::size_t>(i)] >= 0) continue;
    std::deque<int> q{i};
    comp[static_cast<std::size_t>(i)] = n_comp;
    while (!q.empty()) {
      const int u = q.front();
      q.pop_front();
      for (int v : adj_[static_cast<std::size_t>(u)]) {
        if (comp[static_cast<std::size_t>(v)] < 0) {
          comp[static_cast<std::size_t>(v)] = n_comp;
          q.push_back(v);
        }
      }
    }
    ++n_comp;
  }
  const long beta1 =
      static_cast<long>(support_.size()) - static_cast<long>(n_) + n_comp;
  return {n_comp, beta1};
}

std::vector<double> TriadicHypergraph::laplacian_apply(
    const std::vector<double>& f) const {
  if (f.size() != static_cast<std::size_t>(n_))
    throw std::invalid_argument("field length mismatch");
  std::vector<double> out(f.size(), 0.0);
  for (const auto& kv : support_) {
    const int i = kv.first.first, j = kv.first.second;
    const double w = weight(i, j);
    const double d = f[static_cast<std::size_t>(i)] -
                     f[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(i)] += w * d;
    out[static_cast<std::size_t>(j)] -= w * d;
  }
  return out;
}

std::vector<double> TriadicHypergraph::heat_kernel_smooth(
    const std::vector<double>& f, double ell) const {
  if (f.size() != static_cast<std::size_t>(n_))
    throw std::invalid_argument("field length mismatch");
  if (ell < 0) throw std::invalid_argument("negative smoothing scale");
  if (ell == 0 || n_ == 0) return f;
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n_, n_);
  for (const auto& kv : support_) {
    const int i = kv.first.first, j = kv.first.second;
    const double w = weight(i, j);
    L(i, i) += w;
    L(j, j) += w;
    L(i, j) -= w;
    L(j, i) -= w;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(L);
  Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(f.data(), n_);
  Eigen::VectorXd coef = es.eigenvectors().transpose() * x;
  for (int k = 0; k < n_; ++k)
    coef[k] *= std::exp(-ell * std::max(0.0, es.eigenvalues()[k]));
  Eigen::VectorXd y = es.eigenvectors() * coef;
  return std::vector<double>(y.data(), y.data() + n_);
}

bool TriadicHypergraph::caches_consistent() const {
  std::map<Edge, int> support;
  for (const Triad& t : triads_) {
    ++support[make_edge(t[0], t[1])];
    ++support[make_edge(t[0], t[2])];
    ++support[make_edge(t[1], t[2])];
  }
  if (support != support_) return false;
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n_));
  for (const auto& kv : support) {
    adj[static_cast<std::size_t>(kv.first.first)].push_back(kv.first.second);
    adj[static_cast<std::size_t>(kv.first.second)].push_back(kv.first.first);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  if (adj != adj_) return false;
  for (const auto& kv : weights_)
    if (!support_.count(kv.first)) return false;
  return true;
}

TriadNeighborhood TriadNeighborhood::build(const TriadicHypergraph& h) {
  TriadNeighborhood nb;
  const auto& ts = h.triads();
  nb.of.resize(ts.size());
  for (std::size_t a = 0; a < ts.size(); ++a) {
    for (std::size_t b = a + 1; b < ts.size(); ++b) {
      int overlap = 0;
      for (int u : ts[a])
        for (int v : ts[b])
          if (u == v) ++overlap;
      if (overlap == 0) continue;
      const double w = overlap == 2 ? 1.0 : 0.0;
      nb.of[a].push_back({b, overlap, w});
      nb.of[b].push_back({a, overlap, w});
    }
  }
  return nb;
}

std::vector<double> TriadNeighborhood::laplacian_apply(
    const std::vector<double>& f) const {
  if (f.size() != of.size())
    throw std::invalid_argument("triad field length mismatch");
  std::vector<double> out(f.size(), 0.0);
  for (std::size_t t = 0; t < of.size(); ++t)
    for (const Entry& e : of[t])
      out[t] += e.weight * (f[t] - f[e.index]);
  return out;
}

}  // namespace trisim
