#include "collapse/proxy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace collapse {

void ScoredSelection::validate() const {
  if (s.size() == 0) throw std::invalid_argument("ScoredSelection: empty");
  if (s.size() != q.size()) throw std::invalid_argument("ScoredSelection: length mismatch");
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (!(s[i] >= 0.0 && s[i] <= 1.0))
      throw std::invalid_argument("ScoredSelection: scores must lie in [0,1]");
    if (q[i] != 0 && q[i] != 1)
      throw std::invalid_argument("ScoredSelection: keep-bits must be 0 or 1");
  }
}

double estimate_p(const ScoredSelection& data) {
  data.validate();
  const double mean_s = data.s.sum() / static_cast<double>(data.n());
  return std::clamp(1.0 - mean_s, 0.0, 1.0);
}

ProxyRates estimate_phi_psi(const ScoredSelection& data) {
  data.validate();
  // phi = E[q s] / E[s], psi = E[q (1-s)] / E[1-s], written as ratios of sums
  // so the binary case reproduces the count-based rates bit-for-bit.
  double sum_s = 0.0, sum_qs = 0.0, sum_one_minus_s = 0.0, sum_q_one_minus_s = 0.0;
  for (Eigen::Index i = 0; i < data.n(); ++i) {
    sum_s += data.s[i];
    sum_one_minus_s += 1.0 - data.s[i];
    if (data.q[i] == 1) {
      sum_qs += data.s[i];
      sum_q_one_minus_s += 1.0 - data.s[i];
    }
  }
  ProxyRates rates;
  if (sum_s > 0.0) rates.phi = sum_qs / sum_s;
  if (sum_one_minus_s > 0.0) rates.psi = sum_q_one_minus_s / sum_one_minus_s;
  return rates;
}

std::optional<double> proxy_pstar(const ScoredSelection& data) {
  const ProxyRates rates = estimate_phi_psi(data);
  if (!rates.phi || !rates.psi || *rates.phi <= 0.0) return std::nullopt;
  return 1.0 / (1.0 + *rates.psi / *rates.phi);
}

ScoredSelection load_scored_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_scored_csv: cannot open " + path);
  std::vector<double> scores;
  std::vector<int> keeps;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double s = 0.0;
    int q = 0;
    if (!(row >> s >> q)) {
      if (first) {  // tolerate a header line
        first = false;
        continue;
      }
      throw std::runtime_error("load_scored_csv: malformed line: " + line);
    }
    first = false;
    scores.push_back(s);
    keeps.push_back(q);
  }
  ScoredSelection data;
  data.s = Eigen::Map<Eigen::VectorXd>(scores.data(), static_cast<Eigen::Index>(scores.size()));
  data.q = Eigen::Map<Eigen::ArrayXi>(keeps.data(), static_cast<Eigen::Index>(keeps.size()));
  data.validate();
  return data;
}

}  // namespace collapse
