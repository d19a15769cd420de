#include "aistrack/sketch.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "aistrack/error.hpp"

namespace aistrack {

std::uint64_t ecdf_rank(double p, std::uint64_t n) noexcept {
  if (n == 0) return 0;
  const double x = p * static_cast<double>(n);
  if (!(x > 1.0)) return 1;
  // Absorb the representation error of p before rounding up.
  const auto r = static_cast<std::uint64_t>(std::ceil(x - 1e-7));
  return std::clamp<std::uint64_t>(r, 1, n);
}

QuantileSketch::QuantileSketch(std::size_t k) : k_(std::max<std::size_t>(k, 2)) {}

std::size_t QuantileSketch::retained() const noexcept {
  std::size_t r = 0;
  for (const auto& l : levels_) r += l.size();
  return r;
}

void QuantileSketch::add(double v) {
  if (levels_.empty()) {
    levels_.emplace_back();
    parity_.push_back(0);
  }
  levels_[0].push_back(v);
  ++n_;
  if (levels_[0].size() >= k_) settle();
}

void QuantileSketch::merge(const QuantileSketch& other) {
  if (other.levels_.size() > levels_.size()) {
    levels_.resize(other.levels_.size());
    parity_.resize(other.levels_.size(), 0);
  }
  for (std::size_t h = 0; h < other.levels_.size(); ++h)
    levels_[h].insert(levels_[h].end(), other.levels_[h].begin(), other.levels_[h].end());
  n_ += other.n_;
  settle();
}

void QuantileSketch::settle() {
  for (std::size_t h = 0; h < levels_.size(); ++h)
    if (levels_[h].size() >= k_) compact(h);
}

void QuantileSketch::compact(std::size_t h) {
  if (h + 1 == levels_.size()) {
    levels_.emplace_back();
    parity_.push_back(0);
  }
  auto& buf = levels_[h];
  std::sort(buf.begin(), buf.end());
  const std::size_t pairs = buf.size() / 2;
  auto& up = levels_[h + 1];
  for (std::size_t i = 0; i < pairs; ++i) up.push_back(buf[2 * i + parity_[h]]);
  parity_[h] ^= 1;
  // An odd leftover (the largest value) stays at this level.
  if (buf.size() % 2 == 1)
    buf.erase(buf.begin(), buf.end() - 1);
  else
    buf.clear();
}

std::vector<double> QuantileSketch::quantiles(std::span<const double> ps) const {
  if (empty()) throw Error(ErrorCode::EmptyBin, "quantile of an empty sketch");
  std::vector<std::pair<double, std::uint64_t>> items;
  items.reserve(retained());
  for (std::size_t h = 0; h < levels_.size(); ++h)
    for (double v : levels_[h]) items.emplace_back(v, std::uint64_t{1} << h);
  std::sort(items.begin(), items.end());
  std::vector<std::uint64_t> cumulative(items.size());
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < items.size(); ++i) cumulative[i] = acc += items[i].second;

  std::vector<double> out;
  out.reserve(ps.size());
  for (double p : ps) {
    const std::uint64_t r = ecdf_rank(p, n_);
    const auto it = std::lower_bound(cumulative.begin(), cumulative.end(), r);
    out.push_back(items[static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - cumulative.begin(),
                                                                            static_cast<std::ptrdiff_t>(items.size()) - 1))]
                      .first);
  }
  return out;
}

double QuantileSketch::quantile(double p) const { return quantiles(std::span<const double>(&p, 1)).front(); }

nlohmann::json QuantileSketch::to_json() const {
  return {{"k", k_}, {"n", n_}, {"levels", levels_}, {"parity", parity_}};
}

QuantileSketch QuantileSketch::from_json(const nlohmann::json& j) {
  QuantileSketch s(j.at("k").get<std::size_t>());
  s.n_ = j.at("n").get<std::uint64_t>();
  s.levels_ = j.at("levels").get<std::vector<std::vector<double>>>();
  s.parity_ = j.at("parity").get<std::vector<std::uint8_t>>();
  if (s.parity_.size() != s.levels_.size()) throw Error(ErrorCode::SchemaMismatch, "sketch parity/levels size");
  std::uint64_t weight = 0;
  for (std::size_t h = 0; h < s.levels_.size(); ++h) weight += s.levels_[h].size() << h;
  if (weight != s.n_) throw Error(ErrorCode::SchemaMismatch, "sketch weight does not match its count");
  return s;
}

}  // namespace aistrack
