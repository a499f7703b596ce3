#include "frd/field_sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "frd/error.hpp"
#include "frd/fft.hpp"
#include "frd/oracle.hpp"
#include "frd/parallel.hpp"

namespace frd::sampling {

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
  constexpr std::uint32_t M0 = 0xD2511F53u, M1 = 0xCD9E8D57u;
  constexpr std::uint32_t W0 = 0x9E3779B9u, W1 = 0xBB67AE85u;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(M0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(M1) * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32), lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32), lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += W0;
    key[1] += W1;
  }
  return ctr;
}

void white_noise(std::uint64_t seed, std::uint32_t stream, std::uint64_t sample, std::span<double> out) {
  const std::array<std::uint32_t, 2> key{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  constexpr double two_pi = 2.0 * std::numbers::pi;
  constexpr double inv53 = 1.0 / 9007199254740992.0;  // 2^-53
  for (std::size_t pair = 0; 2 * pair < out.size(); ++pair) {
    auto r = philox4x32({static_cast<std::uint32_t>(pair), stream, static_cast<std::uint32_t>(sample),
                         static_cast<std::uint32_t>(sample >> 32)},
                        key);
    const std::uint64_t a = (static_cast<std::uint64_t>(r[0]) << 32) | r[1];
    const std::uint64_t b = (static_cast<std::uint64_t>(r[2]) << 32) | r[3];
    const double u1 = (static_cast<double>(a >> 11) + 0.5) * inv53;  // (0, 1)
    const double u2 = static_cast<double>(b >> 11) * inv53;
    const double radius = std::sqrt(-2.0 * std::log(u1));
    out[2 * pair] = radius * std::cos(two_pi * u2);
    if (2 * pair + 1 < out.size()) out[2 * pair + 1] = radius * std::sin(two_pi * u2);
  }
}

std::vector<double> sqrt_multiplier(const Kernel& kernel) {
  const auto& m = kernel.multiplier();
  const double top = std::max(m.max(), 0.0);
  const double floor = -1e-12 * top;
  std::vector<double> out(m.values().size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    const double v = m[i];
    if (v < floor) throw ContractViolation("psd", "covariance multiplier at mode " + std::to_string(i), v);
    out[i] = v > 0.0 ? std::sqrt(v) : 0.0;
  }
  return out;
}

namespace {

// Per-thread synthesis: field = IDFT(sqrt(K^) DFT(noise)) / N.
class Synthesizer {
 public:
  Synthesizer(const TorusGeometry& g, std::vector<const std::vector<double>*> roots)
      : g_(g), roots_(std::move(roots)), fft_(g), map_(fft_.half_size()) {
    // full index of each half-spectrum entry (both share the same leading coordinates)
    const std::size_t m = static_cast<std::size_t>(g.side()), mh = m / 2 + 1;
    for (std::size_t h = 0; h < map_.size(); ++h) {
      const std::size_t last = h % mh, lead = h / mh;
      map_[h] = lead * m + last;
    }
  }

  void synthesize(std::size_t which, std::uint64_t seed, std::uint32_t stream, std::uint64_t sample, std::span<double> out) {
    white_noise(seed, stream, sample, fft_.real());
    fft_.forward();
    auto half = fft_.half();
    const auto& root = *roots_[which];
    for (std::size_t h = 0; h < half.size(); ++h) half[h] *= root[map_[h]];
    fft_.backward();
    const double inv = 1.0 / static_cast<double>(g_.size());
    auto r = fft_.real();
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = r[i] * inv;
  }

 private:
  TorusGeometry g_;
  std::vector<const std::vector<double>*> roots_;
  fft::RealTransform fft_;
  std::vector<std::size_t> map_;
};

// Runs body(synth, i) for i in [0, n) with one synthesizer per worker block.
void run_blocks(const TorusGeometry& g, const std::vector<const std::vector<double>*>& roots, std::size_t n,
                const std::function<void(Synthesizer&, std::size_t)>& body) {
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(parallel::worker_count(), n));
  parallel::parallel_for(workers, [&](std::size_t w) {
    Synthesizer synth(g, roots);
    const std::size_t lo = n * w / workers, hi = n * (w + 1) / workers;
    for (std::size_t i = lo; i < hi; ++i) body(synth, i);
  });
}

}  // namespace

std::vector<FieldSample> sample_scale(const Kernel& kernel, std::uint64_t seed, std::size_t n, std::uint32_t stream) {
  if (n == 0) throw DomainError("sample count must be >= 1");
  const auto root = sqrt_multiplier(kernel);
  const auto& g = kernel.geometry();
  std::vector<std::vector<double>> fields(n);
  run_blocks(g, {&root}, n, [&](Synthesizer& synth, std::size_t i) {
    fields[i].resize(g.size());
    synth.synthesize(0, seed, stream, i, fields[i]);
  });
  std::vector<FieldSample> out;
  out.reserve(n);
  const std::string label = stream == kRemainderStream ? "remainder" : "scale " + std::to_string(stream);
  for (std::size_t i = 0; i < n; ++i) out.push_back({GridFunction(g, std::move(fields[i])), label, seed, i});
  return out;
}

void visit_total_samples(const FracDecomposition& dec, std::uint64_t seed, std::size_t n, const SampleVisitor& visit) {
  if (n == 0) throw DomainError("sample count must be >= 1");
  if (!(dec.params.m2() > 0.0)) throw DomainError("total fields need m2 > 0 (the massless zero mode has infinite variance)");
  if (std::find(dec.built.begin(), dec.built.end(), false) != dec.built.end())
    throw DomainError("total fields need every scale built");
  const auto& g = dec.geometry;
  std::vector<std::vector<double>> roots;
  for (const auto& k : dec.scales) roots.push_back(sqrt_multiplier(k));
  roots.push_back(sqrt_multiplier(dec.remainder));
  std::vector<const std::vector<double>*> ptrs;
  for (const auto& r : roots) ptrs.push_back(&r);

  const std::size_t streams = roots.size();
  run_blocks(g, ptrs, n, [&](Synthesizer& synth, std::size_t i) {
    std::vector<std::vector<double>> fields(streams, std::vector<double>(g.size()));
    std::vector<double> total(g.size(), 0.0);
    for (std::size_t k = 0; k < streams; ++k) {
      const auto stream = k + 1 == streams ? kRemainderStream : static_cast<std::uint32_t>(k);
      synth.synthesize(k, seed, stream, i, fields[k]);
      for (std::size_t x = 0; x < total.size(); ++x) total[x] += fields[k][x];
    }
    visit(i, fields, total);
  });
}

std::vector<FieldSample> sample_total(const FracDecomposition& dec, std::uint64_t seed, std::size_t n) {
  std::vector<std::vector<double>> totals(n);
  visit_total_samples(dec, seed, n, [&](std::size_t i, std::span<const std::vector<double>>, std::span<const double> t) {
    totals[i].assign(t.begin(), t.end());
  });
  std::vector<FieldSample> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back({GridFunction(dec.geometry, std::move(totals[i])), "total", seed, i});
  return out;
}

double translation_average(const TorusGeometry& g, std::span<const double> a, std::span<const double> b,
                           std::span<const int> offset) {
  if (a.size() != g.size() || b.size() != g.size()) throw DomainError("field shape mismatch");
  const int d = g.dim();
  const std::size_t m = static_cast<std::size_t>(g.side());
  // shift per axis, applied to row-major coordinates
  std::vector<std::size_t> shift(d);
  for (int k = 0; k < d; ++k) shift[k] = static_cast<std::size_t>(g.wrap(offset[k]));
  std::vector<std::size_t> coord(d, 0);
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    std::size_t j = 0;
    for (int k = 0; k < d; ++k) {
      std::size_t c = coord[k] + shift[k];
      if (c >= m) c -= m;
      j = j * m + c;
    }
    acc += a[i] * b[j];
    for (int k = d - 1; k >= 0; --k) {
      if (++coord[k] < m) break;
      coord[k] = 0;
    }
  }
  return acc / static_cast<double>(a.size());
}

CovarianceEstimate summarize_products(std::span<const double> c, std::vector<int> offset) {
  if (c.size() < 2) throw DomainError("covariance estimates need n >= 2");
  CovarianceEstimate e;
  e.offset = std::move(offset);
  e.n = c.size();
  double mean = 0.0;
  for (double v : c) mean += v;
  mean /= static_cast<double>(c.size());
  double ss = 0.0;
  for (double v : c) ss += (v - mean) * (v - mean);
  e.estimate = mean;
  e.std_error = std::sqrt(ss / static_cast<double>(c.size() - 1) / static_cast<double>(c.size()));
  e.degenerate = e.std_error == 0.0;
  return e;
}

std::vector<CovarianceEstimate> empirical_covariance(std::span<const FieldSample> samples,
                                                     std::span<const std::vector<int>> offsets) {
  if (samples.size() < 2) throw DomainError("covariance estimates need n >= 2");
  const auto& g = samples.front().field.geometry();
  std::vector<CovarianceEstimate> out;
  for (const auto& off : offsets) {
    if (static_cast<int>(off.size()) != g.dim()) throw DomainError("offset dimension mismatch");
    std::vector<double> c(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i)
      c[i] = translation_average(g, samples[i].field.values(), samples[i].field.values(), off);
    out.push_back(summarize_products(c, off));
  }
  return out;
}

nlohmann::json SamplerReport::to_json() const {
  auto rows = nlohmann::json::array();
  for (const auto& c : checks)
    rows.push_back({{"quantity", c.quantity},
                    {"offset", c.offset},
                    {"expected", c.expected},
                    {"estimate", c.estimate.estimate},
                    {"std_error", c.estimate.std_error},
                    {"degenerate", c.estimate.degenerate},
                    {"z", c.z},
                    {"pass", c.pass}});
  return {{"seed", seed}, {"n", n}, {"checks", rows}, {"pass", pass}};
}

SamplerReport check_sampler(const FracDecomposition& dec, std::uint64_t seed, std::size_t n) {
  if (n < 2) throw DomainError("covariance estimates need n >= 2");
  const auto& g = dec.geometry;
  const int d = g.dim(), J = dec.depth();
  auto along = [d](int x) {
    std::vector<int> off(d, 0);
    off[0] = x;
    return off;
  };

  struct Probe {
    std::string quantity;
    std::size_t a, b;  // field indices; a == b == npos means the total
    std::vector<int> offset;
    double expected;
  };
  constexpr auto total_id = static_cast<std::size_t>(-1);
  std::vector<Probe> probes;
  const auto oracle_kernel = oracle::green_fractional(dec.params, g);
  for (int x : {0, 1, 3, 9}) {
    if (2 * x >= g.side()) continue;
    auto off = along(x);
    probes.push_back({"total", total_id, total_id, off, oracle_kernel.grid().values()[g.index_of(off)]});
  }
  for (int j = 0; j <= J; ++j) {
    const int beyond = static_cast<int>(std::floor(g.declared_range(j))) + 1;
    if (2 * beyond < g.side())
      probes.push_back({"scale " + std::to_string(j), static_cast<std::size_t>(j), static_cast<std::size_t>(j),
                        along(beyond), 0.0});
    if (j < J)
      probes.push_back({"scale " + std::to_string(j) + " x scale " + std::to_string(j + 1),
                        static_cast<std::size_t>(j), static_cast<std::size_t>(j + 1), along(0), 0.0});
  }

  std::vector<std::vector<double>> c(probes.size(), std::vector<double>(n));
  visit_total_samples(dec, seed, n, [&](std::size_t i, std::span<const std::vector<double>> fields,
                                        std::span<const double> total) {
    for (std::size_t k = 0; k < probes.size(); ++k) {
      const auto& pr = probes[k];
      const auto a = pr.a == total_id ? total : std::span<const double>(fields[pr.a]);
      const auto b = pr.b == total_id ? total : std::span<const double>(fields[pr.b]);
      c[k][i] = translation_average(g, a, b, pr.offset);
    }
  });

  SamplerReport rep;
  rep.seed = seed;
  rep.n = n;
  rep.pass = true;
  for (std::size_t k = 0; k < probes.size(); ++k) {
    SamplerCheck ch;
    ch.quantity = probes[k].quantity;
    ch.offset = probes[k].offset;
    ch.expected = probes[k].expected;
    ch.estimate = summarize_products(c[k], probes[k].offset);
    ch.z = ch.estimate.degenerate ? 0.0 : (ch.estimate.estimate - ch.expected) / ch.estimate.std_error;
    ch.pass = !ch.estimate.degenerate && std::abs(ch.z) <= 3.0;
    rep.pass = rep.pass && ch.pass;
    rep.checks.push_back(std::move(ch));
  }
  return rep;
}

}  // namespace frd::sampling
