#include "adi/harness/property.hpp"

#include <sstream>

namespace adi::harness {

std::vector<double> shrink_score(double x) {
  std::vector<double> out;
  if (x == 0.0) return out;
  out.push_back(0.0);
  out.push_back(x / 2.0);
  return out;
}

std::vector<std::vector<double>> shrink_score_vector(
    const std::vector<double>& v) {
  std::vector<std::vector<double>> out;
  if (v.size() > 1) {
    for (std::size_t i = 0; i < v.size(); ++i) {
      std::vector<double> smaller;
      smaller.reserve(v.size() - 1);
      for (std::size_t j = 0; j < v.size(); ++j) {
        if (j != i) smaller.push_back(v[j]);
      }
      out.push_back(std::move(smaller));
    }
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (double s : shrink_score(v[i])) {
      std::vector<double> copy = v;
      copy[i] = s;
      out.push_back(std::move(copy));
    }
  }
  return out;
}

std::string render_scores(const std::vector<double>& v) {
  std::ostringstream os;
  os.precision(17);
  os << "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    os << v[i];
  }
  os << "]";
  return os.str();
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace adi::harness
