#include "gatmonad/heap.hpp"

#include <sstream>
#include <stdexcept>

namespace gatmonad {

Heap::Heap(std::vector<int> parents) : parents_(std::move(parents)) {
  for (std::size_t i = 0; i < parents_.size(); ++i) {
    const int p = parents_[i];
    if (p < 0 || p >= static_cast<int>(i) + 1)
      throw std::invalid_argument("heap condition φ(i) < i fails at node " +
                                  std::to_string(i + 1));
  }
}

Heap Heap::linear(int n) {
  std::vector<int> p(n);
  for (int i = 0; i < n; ++i) p[i] = i;
  return Heap(std::move(p));
}

int Heap::parent(int i) const {
  if (i < 0 || i > size()) throw std::out_of_range("node out of range");
  return i == 0 ? 0 : parents_[i - 1];
}

int depth(const Heap& h, int i) {
  if (i < 1 || i > h.size()) throw std::out_of_range("node out of range");
  int d = 1;
  for (int j = h.parent(i); j != 0; j = h.parent(j)) ++d;
  return d;
}

bool leq(const Heap& h, int i, int j) {
  if (i < 0 || j < 0 || i > h.size() || j > h.size())
    throw std::out_of_range("node out of range");
  while (j > i) j = h.parent(j);
  return i == j;
}

std::vector<int> downset(const Heap& h, int i) {
  std::vector<int> out;
  for (int j = i; j != 0; j = h.parent(j)) out.push_back(j);
  return {out.rbegin(), out.rend()};
}

bool is_leaf(const Heap& h, int i) {
  for (int p : h.parents())
    if (p == i) return false;
  return true;
}

std::vector<Heap> enumerate_heaps(int n) {
  std::vector<Heap> out;
  std::vector<int> p(n, 0);
  while (true) {
    out.emplace_back(p);
    int k = n - 1;
    while (k >= 0 && p[k] == k) p[k--] = 0;
    if (k < 0) break;
    ++p[k];
  }
  return out;
}

Heap from_order(int n, const std::function<bool(int, int)>& order) {
  std::vector<int> p(n, 0);
  for (int j = 1; j <= n; ++j)
    for (int i = j - 1; i >= 1; --i)
      if (order(i, j)) {
        p[j - 1] = i;
        break;
      }
  return Heap(std::move(p));
}

Heap strip(const Heap& h, int m) {
  const int n = h.size();
  if (m < 1 || m >= n)
    throw std::invalid_argument("strip needs a non-maximal node");
  if (!is_leaf(h, m))
    throw std::invalid_argument("strip needs a leaf (node in the image of φ)");
  std::vector<int> p(n - 1);
  for (int i = 1; i <= n - 1; ++i) {
    if (i < m) {
      p[i - 1] = h.parent(i);
    } else {
      const int q = h.parent(i + 1);
      p[i - 1] = q < m ? q : q - 1;
    }
  }
  return Heap(std::move(p));
}

Heap restrict(const Heap& h, int m) {
  if (m < 0 || m > h.size()) throw std::out_of_range("restrict beyond size");
  return Heap(std::vector<int>(h.parents().begin(), h.parents().begin() + m));
}

Heap boundary(const Heap& h) {
  if (h.size() == 0) throw std::invalid_argument("empty heap has no boundary");
  return restrict(h, h.size() - 1);
}

void check_star_family(const Heap& psi, std::span<const Heap> family) {
  const int n = psi.size();
  if (static_cast<int>(family.size()) != n)
    throw std::invalid_argument("family size differs from heap size");
  for (int i = 1; i <= n; ++i) {
    const Heap& fi = family[i - 1];
    if (fi.size() != depth(psi, i))
      throw std::invalid_argument("family member " + std::to_string(i) +
                                  " has size " + std::to_string(fi.size()) +
                                  ", expected depth " +
                                  std::to_string(depth(psi, i)));
    const int j = psi.parent(i);
    if (j > 0 && boundary(fi) != family[j - 1])
      throw std::invalid_argument("family member " + std::to_string(i) +
                                  " is not compatible with its parent " +
                                  std::to_string(j));
  }
}

Heap star(const Heap& psi, std::span<const Heap> family) {
  check_star_family(psi, family);
  const int n = psi.size();
  std::vector<int> p(n);
  for (int i = 1; i <= n; ++i) {
    const int d = depth(psi, i);
    int steps = d - family[i - 1].parent(d);
    int j = i;
    while (steps-- > 0) j = psi.parent(j);
    p[i - 1] = j;
  }
  return Heap(std::move(p));
}

Heap star_relational(const Heap& psi, std::span<const Heap> family) {
  check_star_family(psi, family);
  auto order = [&](int i, int j) {
    return leq(psi, i, j) &&
           leq(family[j - 1], depth(psi, i), depth(psi, j));
  };
  return from_order(psi.size(), order);
}

StructurePtr shape_presheaf(const Heap& h) {
  StructureBuilder b;
  for (int i = 1; i <= h.size(); ++i) {
    const int p = h.parent(i);
    // Node i gets id i - 1.
    b.add_type(depth(h, i), p == 0 ? kNone : p - 1, "N" + std::to_string(i));
  }
  return b.build();
}

StructurePtr shape_presheaf_t(const Heap& h) {
  if (h.size() < 1) throw std::invalid_argument("[φ]_t needs n >= 1");
  StructureBuilder b;
  for (int i = 1; i <= h.size(); ++i) {
    const int p = h.parent(i);
    b.add_type(depth(h, i), p == 0 ? kNone : p - 1, "N" + std::to_string(i));
  }
  b.add_term(h.size() - 1, "a");
  return b.build();
}

std::vector<HasseEdge> hasse_edges(const Heap& h) {
  std::vector<HasseEdge> out;
  for (int i = 1; i <= h.size(); ++i)
    if (h.parent(i) > 0) out.push_back({i, h.parent(i)});
  return out;
}

std::vector<int> roots(const Heap& h) {
  std::vector<int> out;
  for (int i = 1; i <= h.size(); ++i)
    if (h.parent(i) == 0) out.push_back(i);
  return out;
}

std::string to_dot(const Heap& h) {
  std::ostringstream o;
  o << "digraph heap {\n";
  for (int i = 1; i <= h.size(); ++i) {
    o << "  " << i << " [label=\"" << i << "\"";
    if (h.parent(i) == 0) o << ", shape=doublecircle";
    o << "];\n";
  }
  for (const auto& e : hasse_edges(h))
    o << "  " << e.child << " -> " << e.parent << ";\n";
  o << "}\n";
  return o.str();
}

namespace {

void ascii_subtree(const Heap& h, int node, const std::string& prefix,
                   bool last, bool root, std::ostringstream& o) {
  if (root) {
    o << node << "\n";
  } else {
    o << prefix << (last ? "`- " : "+- ") << node << "\n";
  }
  std::vector<int> kids;
  for (int i = node + 1; i <= h.size(); ++i)
    if (h.parent(i) == node) kids.push_back(i);
  const std::string next = root ? "" : prefix + (last ? "   " : "|  ");
  for (std::size_t k = 0; k < kids.size(); ++k)
    ascii_subtree(h, kids[k], next, k + 1 == kids.size(), false, o);
}

}  // namespace

std::string to_ascii(const Heap& h) {
  std::ostringstream o;
  for (int r : roots(h)) ascii_subtree(h, r, "", true, true, o);
  return o.str();
}

std::string to_string(const Heap& h) {
  std::string s;
  for (std::size_t i = 0; i < h.parents().size(); ++i) {
    if (i) s += ',';
    s += std::to_string(h.parents()[i]);
  }
  return s;
}

Json to_json(const Heap& h) { return Json(h.parents()); }

Heap heap_from_json(const Json& j) {
  if (!j.is_array()) throw std::invalid_argument("heap must be a JSON array");
  return Heap(j.get<std::vector<int>>());
}

Heap parse_heap(const std::string& text) {
  std::vector<int> p;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad heap entry '" + item + "'");
    }
    if (used != item.size())
      throw std::invalid_argument("bad heap entry '" + item + "'");
    p.push_back(v);
  }
  return Heap(std::move(p));
}

}  // namespace gatmonad
