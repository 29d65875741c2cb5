#pragma once

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace pdir {

using Vertex = int;

// Vertex subsets are kept sorted ascending and duplicate-free.
using VertexSet = std::vector<Vertex>;

// All library errors carry a stable machine-readable name next to the
// human-readable message ("NotDecomposable", "ConstraintViolated", ...).
class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& message)
      : std::runtime_error(message), name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

[[noreturn]] inline void fail(const std::string& name, const std::string& message) {
  throw Error(name, message);
}

inline VertexSet make_set(std::initializer_list<Vertex> vs) {
  VertexSet s(vs);
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

inline VertexSet normalized(VertexSet s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

inline bool set_contains(const VertexSet& s, Vertex v) {
  return std::binary_search(s.begin(), s.end(), v);
}

inline bool is_subset(const VertexSet& a, const VertexSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

inline VertexSet set_union(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline VertexSet set_intersection(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline VertexSet set_difference(const VertexSet& a, const VertexSet& b) {
  VertexSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline VertexSet set_insert(VertexSet s, Vertex v) {
  auto it = std::lower_bound(s.begin(), s.end(), v);
  if (it == s.end() || *it != v) s.insert(it, v);
  return s;
}

// "1,3,5" for {1,3,5}; "" for the empty set.
inline std::string set_key(const VertexSet& s) {
  std::ostringstream os;
  for (size_t i = 0; i < s.size(); ++i) {
    if (i) os << ',';
    os << s[i];
  }
  return os.str();
}

// "{1,3,5}" for diagnostics.
inline std::string set_str(const VertexSet& s) {
  return "{" + set_key(s) + "}";
}

}  // namespace pdir
