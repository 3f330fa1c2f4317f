#include "distlab/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace distlab {

namespace {

double unit_uniform(std::mt19937_64& rng) {
  return (rng() >> 11) * 0x1.0p-53;  // 53 uniform mantissa bits in [0, 1)
}

int bounded(std::mt19937_64& rng, int bound) {  // uniform in [0, bound)
  return static_cast<int>(rng() % static_cast<std::uint64_t>(bound));
}

void fisher_yates(std::vector<int>& v, std::mt19937_64& rng) {
  for (int i = static_cast<int>(v.size()) - 1; i > 0; --i)
    std::swap(v[i], v[bounded(rng, i + 1)]);
}

std::vector<int> random_permutation(int n, std::mt19937_64& rng) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  fisher_yates(v, rng);
  return v;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

Seed hash_seed(Seed seed, std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(splitmix64(seed) ^ a) ^ b);
}

CultureSpec CultureSpec::parse(const std::string& text) {
  CultureSpec spec;
  std::string head = text, param;
  if (auto pos = text.find(':'); pos != std::string::npos) {
    head = text.substr(0, pos);
    param = text.substr(pos + 1);
  }
  auto param_value = [&](const std::string& key) {
    if (param.rfind(key + "=", 0) != 0)
      throw Error("BadParam", "expected " + key + "=<value> in culture '" + text + "'");
    return std::stod(param.substr(key.size() + 1));
  };
  if (head == "attributes") {
    spec.kind = Kind::Attributes;
    if (!param.empty()) spec.d = static_cast<int>(param_value("d"));
    if (spec.d < 1) throw Error("BadParam", "attributes requires d >= 1");
  } else if (head == "ic") {
    spec.kind = Kind::IC;
    if (!param.empty()) throw Error("BadParam", "ic takes no parameters");
  } else if (head == "ic2") {
    spec.kind = Kind::IC2;
    if (!param.empty()) spec.p = param_value("p");
    if (spec.p < 0.0 || spec.p > 0.5) throw Error("BadParam", "ic2 requires p in [0, 0.5]");
  } else if (head == "mallows") {
    spec.kind = Kind::Mallows;
    if (!param.empty()) spec.norm_phi = param_value("normphi");
    if (spec.norm_phi < 0.0 || spec.norm_phi > 1.0)
      throw Error("BadParam", "mallows requires normphi in [0, 1]");
  } else {
    throw Error("BadParam", "unknown culture '" + text + "'");
  }
  return spec;
}

std::string CultureSpec::name() const {
  char buf[64];
  switch (kind) {
    case Kind::Attributes:
      std::snprintf(buf, sizeof(buf), "attributes:d=%d", d);
      return buf;
    case Kind::IC:
      return "ic";
    case Kind::IC2:
      std::snprintf(buf, sizeof(buf), "ic2:p=%g", p);
      return buf;
    case Kind::Mallows:
      std::snprintf(buf, sizeof(buf), "mallows:normphi=%g", norm_phi);
      return buf;
  }
  return "?";
}

ValueDist parse_value_dist(const std::string& text) {
  if (text == "uniform") return ValueDist::Uniform01;
  if (text == "beta") return ValueDist::BetaHalfHalf;
  if (text == "exp") return ValueDist::ExponentialRate1;
  if (text == "spiked") return ValueDist::SpikedUniform;
  throw Error("BadParam", "unknown value distribution '" + text + "'");
}

std::string value_dist_name(ValueDist dist) {
  switch (dist) {
    case ValueDist::Uniform01: return "uniform";
    case ValueDist::BetaHalfHalf: return "beta";
    case ValueDist::ExponentialRate1: return "exp";
    case ValueDist::SpikedUniform: return "spiked";
  }
  return "?";
}

namespace {

// Expected Kendall-tau distance of a Mallows sample with dispersion phi.
double mallows_expected_distance(double phi, int n) {
  double total = 0.0;
  for (int i = 1; i < n; ++i) {
    // Inserting the (i+1)-th item adds j inversions w.p. phi^j / sum.
    double num = 0.0, den = 0.0, p = 1.0;
    for (int j = 0; j <= i; ++j) {
      num += j * p;
      den += p;
      p *= phi;
    }
    total += num / den;
  }
  return total;
}

std::vector<int> mallows_insertion_sample(double phi, int n, std::mt19937_64& rng) {
  std::vector<int> out;
  out.reserve(n);
  std::vector<double> cum;
  for (int i = 0; i < n; ++i) {
    cum.assign(i + 1, 0.0);
    double acc = 0.0, p = 1.0;
    for (int j = 0; j <= i; ++j) {
      acc += p;
      cum[j] = acc;
      p *= phi;
    }
    double u = unit_uniform(rng) * acc;
    int j = static_cast<int>(std::lower_bound(cum.begin(), cum.end(), u) - cum.begin());
    j = std::min(j, i);
    out.insert(out.begin() + (i - j), i);  // j new inversions w.r.t. identity
  }
  return out;
}

}  // namespace

double mallows_phi_from_norm(double norm_phi, int n) {
  if (norm_phi <= 0.0) return 0.0;
  if (norm_phi >= 1.0) return 1.0;
  const double target = norm_phi * n * (n - 1) / 4.0;
  double lo = 0.0, hi = 1.0;
  for (int iter = 0; iter < 200; ++iter) {
    double mid = 0.5 * (lo + hi);
    if (mallows_expected_distance(mid, n) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

PreferenceProfile gen_culture(const CultureSpec& spec, int n, Seed seed) {
  if (n < 1) throw Error("BadParam", "n must be >= 1");
  std::mt19937_64 rng(splitmix64(seed));
  PreferenceProfile prefs;
  prefs.n = n;
  prefs.men_ranks.resize(n);
  prefs.women_ranks.resize(n);

  switch (spec.kind) {
    case CultureSpec::Kind::IC: {
      for (int i = 0; i < n; ++i) prefs.men_ranks[i] = random_permutation(n, rng);
      for (int i = 0; i < n; ++i) prefs.women_ranks[i] = random_permutation(n, rng);
      break;
    }
    case CultureSpec::Kind::Attributes: {
      const int d = spec.d;
      auto sample_matrix = [&](int rows) {
        std::vector<std::vector<double>> m(rows, std::vector<double>(d));
        for (auto& row : m)
          for (double& x : row) x = unit_uniform(rng);
        return m;
      };
      auto men_attr = sample_matrix(n), women_attr = sample_matrix(n);
      auto men_weight = sample_matrix(n), women_weight = sample_matrix(n);
      auto rank_by_score = [&](const std::vector<double>& weight,
                               const std::vector<std::vector<double>>& attrs) {
        std::vector<std::pair<double, int>> scored(n);
        for (int j = 0; j < n; ++j) {
          double s = 0.0;
          for (int t = 0; t < d; ++t) s += weight[t] * attrs[j][t];
          scored[j] = {-s, j};  // decreasing score, ties by index ascending
        }
        std::sort(scored.begin(), scored.end());
        std::vector<int> out(n);
        for (int j = 0; j < n; ++j) out[j] = scored[j].second;
        return out;
      };
      for (int i = 0; i < n; ++i) prefs.men_ranks[i] = rank_by_score(men_weight[i], women_attr);
      for (int i = 0; i < n; ++i)
        prefs.women_ranks[i] = rank_by_score(women_weight[i], men_attr);
      break;
    }
    case CultureSpec::Kind::IC2: {
      const int n1 = static_cast<int>(std::floor(spec.p * n));
      auto sample_side = [&](std::vector<std::vector<int>>& rows) {
        for (int i = 0; i < n; ++i) {
          std::vector<int> block1(n1), block2(n - n1);
          std::iota(block1.begin(), block1.end(), 0);
          std::iota(block2.begin(), block2.end(), n1);
          fisher_yates(block1, rng);
          fisher_yates(block2, rng);
          auto& row = rows[i];
          row.clear();
          if (i < n1) {  // first-block agents prefer the opposite first block
            row.insert(row.end(), block1.begin(), block1.end());
            row.insert(row.end(), block2.begin(), block2.end());
          } else {
            row.insert(row.end(), block2.begin(), block2.end());
            row.insert(row.end(), block1.begin(), block1.end());
          }
        }
      };
      sample_side(prefs.men_ranks);
      sample_side(prefs.women_ranks);
      break;
    }
    case CultureSpec::Kind::Mallows: {
      const double phi = mallows_phi_from_norm(spec.norm_phi, n);
      for (int i = 0; i < n; ++i) prefs.men_ranks[i] = mallows_insertion_sample(phi, n, rng);
      for (int i = 0; i < n; ++i) prefs.women_ranks[i] = mallows_insertion_sample(phi, n, rng);
      break;
    }
  }
  prefs.freeze();
  return prefs;
}

double sample_value(ValueDist dist, std::mt19937_64& rng) {
  switch (dist) {
    case ValueDist::Uniform01:
      return unit_uniform(rng);
    case ValueDist::BetaHalfHalf: {
      // Arcsine law: sin^2(pi*U/2) has the Beta(1/2, 1/2) distribution.
      double s = std::sin(M_PI * unit_uniform(rng) / 2.0);
      return s * s;
    }
    case ValueDist::ExponentialRate1:
      return -std::log1p(-unit_uniform(rng));
    case ValueDist::SpikedUniform: {
      if (unit_uniform(rng) < 0.98) return 0.2 * unit_uniform(rng);
      return 1.0 - 0.01 * unit_uniform(rng);
    }
  }
  throw Error("BadParam", "unknown value distribution");
}

Instance fit_values(const PreferenceProfile& prefs, ValueDist dist, Seed seed) {
  const int n = prefs.n;
  std::mt19937_64 rng(splitmix64(seed ^ 0xf17a1ee5ULL));
  ValuationProfile vals;
  vals.men_values = Eigen::MatrixXd::Zero(n, n);
  vals.women_values = Eigen::MatrixXd::Zero(n, n);
  auto fill = [&](const std::vector<std::vector<int>>& ranks, Eigen::MatrixXd& out) {
    std::vector<double> draws(n);
    for (int i = 0; i < n; ++i) {
      for (double& x : draws) x = sample_value(dist, rng);
      std::sort(draws.begin(), draws.end(), std::greater<double>());
      for (int k = 0; k < n; ++k) out(i, ranks[i][k]) = draws[k];
    }
  };
  fill(prefs.men_ranks, vals.men_values);
  fill(prefs.women_ranks, vals.women_values);
  return validate_instance(prefs, std::move(vals));
}

PreferenceProfile adversarial_profile(AdversarialProfile kind, int n) {
  PreferenceProfile prefs;
  switch (kind) {
    case AdversarialProfile::Figure1: {
      if (n != 4) throw Error("BadN", "Figure1 requires n = 4");
      prefs.n = 4;
      prefs.men_ranks = {{0, 1, 2, 3}, {0, 3, 2, 1}, {1, 0, 2, 3}, {3, 1, 2, 0}};
      prefs.women_ranks = {{3, 2, 0, 1}, {1, 3, 0, 2}, {3, 0, 1, 2}, {2, 1, 0, 3}};
      break;
    }
    case AdversarialProfile::Figure2: {
      if (n != 4) throw Error("BadN", "Figure2 requires n = 4");
      prefs.n = 4;
      prefs.men_ranks = {{1, 0, 3, 2}, {2, 3, 1, 0}, {0, 2, 3, 1}, {2, 1, 0, 3}};
      prefs.women_ranks = {{1, 0, 2, 3}, {2, 1, 3, 0}, {0, 2, 1, 3}, {0, 3, 1, 2}};
      break;
    }
    case AdversarialProfile::CyclicShift: {
      if (n < 2) throw Error("BadN", "cyclic shift requires n >= 2");
      prefs.n = n;
      prefs.men_ranks.assign(n, std::vector<int>(n));
      prefs.women_ranks.assign(n, std::vector<int>(n));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          prefs.men_ranks[i][j] = (i + j) % n;
          prefs.women_ranks[i][j] = (i + 1 + j) % n;
        }
      break;
    }
    case AdversarialProfile::ReverseCyclicShift: {
      if (n < 2) throw Error("BadN", "reverse cyclic shift requires n >= 2");
      prefs.n = n;
      prefs.men_ranks.assign(n, std::vector<int>(n));
      prefs.women_ranks.assign(n, std::vector<int>(n));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          prefs.men_ranks[i][j] = (i + j) % n;
          prefs.women_ranks[i][j] = ((i - 1 - j) % n + n) % n;
        }
      break;
    }
  }
  prefs.freeze();
  return prefs;
}

ValuationProfile adversarial_valuation(AdversarialValuation kind, const PreferenceProfile& prefs,
                                       const std::vector<bool>& selective_men) {
  const int n = prefs.n;
  ValuationProfile out;
  out.men_values = Eigen::MatrixXd::Zero(n, n);
  out.women_values = Eigen::MatrixXd::Zero(n, n);

  if (kind == AdversarialValuation::V1 || kind == AdversarialValuation::V2) {
    if (!(prefs == adversarial_profile(AdversarialProfile::Figure2, 4)))
      throw Error("BadCombination", "V1/V2 valuations require the Figure2 profile");
    // One side: value 1 for the favorite. Other side: agents 1 and 3 likewise;
    // agents 2 and 4 value their two top choices at 1/2 each.
    auto top_one = [&](Eigen::MatrixXd& vals, const std::vector<std::vector<int>>& ranks,
                       int i) { vals(i, ranks[i][0]) = 1.0; };
    auto top_two_half = [&](Eigen::MatrixXd& vals, const std::vector<std::vector<int>>& ranks,
                            int i) {
      vals(i, ranks[i][0]) = 0.5;
      vals(i, ranks[i][1]) = 0.5;
    };
    auto& unit_side = kind == AdversarialValuation::V1 ? out.men_values : out.women_values;
    auto& unit_ranks = kind == AdversarialValuation::V1 ? prefs.men_ranks : prefs.women_ranks;
    auto& mixed_side = kind == AdversarialValuation::V1 ? out.women_values : out.men_values;
    auto& mixed_ranks = kind == AdversarialValuation::V1 ? prefs.women_ranks : prefs.men_ranks;
    for (int i = 0; i < 4; ++i) top_one(unit_side, unit_ranks, i);
    top_one(mixed_side, mixed_ranks, 0);
    top_one(mixed_side, mixed_ranks, 2);
    top_two_half(mixed_side, mixed_ranks, 1);
    top_two_half(mixed_side, mixed_ranks, 3);
    return out;
  }

  // SelectiveIndifferent: a selective agent values only its favorite (at 1),
  // an indifferent agent values everyone at 1/n. Each man's suitor takes the
  // complementary role.
  if (static_cast<int>(selective_men.size()) != n)
    throw Error("BadCombination", "selective_men must assign every man");
  std::vector<std::optional<bool>> selective_women(n);
  for (int m = 0; m < n; ++m) {
    auto fs = favorite_and_suitor(prefs, man(m));
    if (!fs.suitor) throw Error("BadCombination", "man " + agent_label(man(m)) + " has no suitor");
    selective_women[fs.suitor->index] = !selective_men[m];
  }
  auto fill_agent = [&](Eigen::MatrixXd& vals, const std::vector<std::vector<int>>& ranks, int i,
                        bool selective) {
    if (selective)
      vals(i, ranks[i][0]) = 1.0;
    else
      for (int j = 0; j < n; ++j) vals(i, j) = 1.0 / n;
  };
  for (int m = 0; m < n; ++m) fill_agent(out.men_values, prefs.men_ranks, m, selective_men[m]);
  for (int w = 0; w < n; ++w) {
    if (!selective_women[w])
      throw Error("BadCombination", "woman " + agent_label(woman(w)) + " has no suitor role");
    fill_agent(out.women_values, prefs.women_ranks, w, *selective_women[w]);
  }
  return out;
}

}  // namespace distlab
