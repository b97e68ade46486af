#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <queue>
#include <vector>

namespace oracle {

// Optimal weighted code length: the sum of all merge weights of the
// two-smallest merging procedure.
inline std::uint64_t huffman_cost(const std::vector<std::uint64_t>& weights) {
  std::priority_queue<std::uint64_t, std::vector<std::uint64_t>, std::greater<>> q(weights.begin(), weights.end());
  std::uint64_t cost = 0;
  while (q.size() > 1) {
    const auto a = q.top();
    q.pop();
    const auto b = q.top();
    q.pop();
    cost += a + b;
    q.push(a + b);
  }
  return cost;
}

// Leaf depths of an explicit pointer tree built by repeated merging.
inline std::vector<int> huffman_depths(const std::vector<std::uint64_t>& weights) {
  struct Node {
    std::uint64_t w;
    int leaf;
    std::shared_ptr<Node> l, r;
  };
  auto cmp = [](const std::shared_ptr<Node>& a, const std::shared_ptr<Node>& b) { return a->w > b->w; };
  std::priority_queue<std::shared_ptr<Node>, std::vector<std::shared_ptr<Node>>, decltype(cmp)> q(cmp);
  for (std::size_t i = 0; i < weights.size(); ++i) q.push(std::make_shared<Node>(Node{weights[i], int(i), {}, {}}));
  while (q.size() > 1) {
    auto a = q.top();
    q.pop();
    auto b = q.top();
    q.pop();
    q.push(std::make_shared<Node>(Node{a->w + b->w, -1, a, b}));
  }
  std::vector<int> depth(weights.size(), 0);
  std::function<void(const Node&, int)> walk = [&](const Node& n, int d) {
    if (n.leaf >= 0) {
      depth[n.leaf] = d;
      return;
    }
    walk(*n.l, d + 1);
    walk(*n.r, d + 1);
  };
  walk(*q.top(), 0);
  return depth;
}

}  // namespace oracle
