#include "gatmonad/inclist.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace gatmonad {

IncList::IncList(std::vector<int> values) : values_(std::move(values)) {
  int prev = 0;
  for (int v : values_) {
    if (v <= prev)
      throw std::invalid_argument("inc-list must be strictly increasing from 1");
    prev = v;
  }
}

IncList IncList::identity(int n) {
  std::vector<int> v(n);
  for (int i = 0; i < n; ++i) v[i] = i + 1;
  return IncList(std::move(v));
}

int IncList::at(int i) const {
  if (i < 0 || i > length()) throw std::out_of_range("inc-list index");
  return i == 0 ? 0 : values_[i - 1];
}

bool IncList::contains(int v) const {
  return std::binary_search(values_.begin(), values_.end(), v);
}

int IncList::position(int v) const {
  auto it = std::lower_bound(values_.begin(), values_.end(), v);
  if (it == values_.end() || *it != v) return 0;
  return static_cast<int>(it - values_.begin()) + 1;
}

std::vector<int> IncList::gaps() const {
  std::vector<int> out;
  std::size_t k = 0;
  for (int v = 1; v <= last(); ++v) {
    if (k < values_.size() && values_[k] == v)
      ++k;
    else
      out.push_back(v);
  }
  return out;
}

std::vector<IncList> enumerate_inclists(int n, int bound) {
  std::vector<IncList> out;
  if (n < 0 || bound < n) return out;
  std::vector<int> v(n);
  for (int i = 0; i < n; ++i) v[i] = i + 1;
  while (true) {
    out.emplace_back(v);
    int k = n - 1;
    while (k >= 0 && v[k] == bound - (n - 1 - k)) --k;
    if (k < 0) break;
    ++v[k];
    for (int i = k + 1; i < n; ++i) v[i] = v[i - 1] + 1;
  }
  return out;
}

IncList compose(const IncList& beta, const IncList& alpha) {
  if (beta.length() != alpha.last())
    throw std::invalid_argument("compose: outer length " +
                                std::to_string(beta.length()) +
                                " differs from inner top value " +
                                std::to_string(alpha.last()));
  std::vector<int> v(alpha.length());
  for (int i = 1; i <= alpha.length(); ++i) v[i - 1] = beta.at(alpha.at(i));
  return IncList(std::move(v));
}

IncList restrict(const IncList& a, int m) {
  if (m < 0 || m > a.length()) throw std::out_of_range("restrict beyond length");
  return IncList(std::vector<int>(a.values().begin(), a.values().begin() + m));
}

IncList boundary(const IncList& a) {
  if (a.length() == 0) throw std::invalid_argument("empty inc-list has no boundary");
  return restrict(a, a.length() - 1);
}

Split split(const IncList& a, int m, int j) {
  const int n = a.length();
  if (m < 0 || m >= n) throw std::invalid_argument("split position out of range");
  if (!(a.at(m) < j && j < a.at(m + 1)))
    throw std::invalid_argument("split value " + std::to_string(j) +
                                " is not strictly between neighbours");
  std::vector<int> v = a.values();
  v.insert(v.begin() + m, j);
  IncList longer(std::move(v));
  IncList shorter = restrict(longer, m + 1);
  return {std::move(longer), std::move(shorter)};
}

namespace {

StructurePtr build_shape(const IncList& a, bool with_term) {
  if (a.length() < 1) throw std::invalid_argument("[α] needs n >= 1");
  StructureBuilder b;
  for (int d = 1; d <= a.last(); ++d)
    b.add_type(d, d == 1 ? kNone : d - 2, "D" + std::to_string(d));
  for (int g : a.gaps()) b.add_term(g - 1, "g" + std::to_string(g));
  if (with_term) b.add_term(a.last() - 1, "a");
  return b.build();
}

}  // namespace

StructurePtr shape_presheaf(const IncList& a) { return build_shape(a, false); }
StructurePtr shape_presheaf_t(const IncList& a) { return build_shape(a, true); }

std::string to_string(const IncList& a) {
  std::string s;
  for (std::size_t i = 0; i < a.values().size(); ++i) {
    if (i) s += ',';
    s += std::to_string(a.values()[i]);
  }
  return s;
}

Json to_json(const IncList& a) { return Json(a.values()); }

IncList inclist_from_json(const Json& j) {
  if (!j.is_array()) throw std::invalid_argument("inc-list must be a JSON array");
  return IncList(j.get<std::vector<int>>());
}

IncList parse_inclist(const std::string& text) {
  std::vector<int> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    int x = 0;
    try {
      x = std::stoi(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad inc-list entry '" + item + "'");
    }
    if (used != item.size())
      throw std::invalid_argument("bad inc-list entry '" + item + "'");
    v.push_back(x);
  }
  return IncList(std::move(v));
}

}  // namespace gatmonad
