#include "hignn/training_data.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "hignn/mobility.hpp"
#include "hignn/particle_system.hpp"
#include "hignn/text_io.hpp"

namespace hignn {

namespace {

Vec3 random_unit_vector(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double z = 2.0 * u01(rng) - 1.0;
  const double phi = 2.0 * std::numbers::pi * u01(rng);
  const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {s * std::cos(phi), s * std::sin(phi), z};
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

double min_gap_of(const std::vector<Vec3>& pos, double radius) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pos.size(); ++i)
    for (std::size_t j = i + 1; j < pos.size(); ++j)
      best = std::min(best, norm(pos[j] - pos[i]) - 2.0 * radius);
  return best;
}

Vec3 basis_force(int axis) {
  switch (axis) {
    case 0: return {1.0, 0.0, 0.0};
    case 1: return {0.0, 1.0, 0.0};
    default: return {0.0, 0.0, 1.0};
  }
}

/// One configuration; near-contact samples pin the first pair inside the
/// near-contact band, all others are rejected out of it so the requested
/// quota is the realized fraction.
std::vector<Vec3> draw_positions(std::mt19937_64& rng, const SamplerConfig& cfg,
                                 bool near_contact) {
  const double a = cfg.radius;
  const double lo = 2.0 * a + cfg.min_gap * a;
  const double hi = cfg.max_extent;
  const double near_hi = 2.0 * a + cfg.near_contact_gap * a;
  std::uniform_int_distribution<int> pick_anchor(0, 1);

  for (int attempt = 0; attempt < cfg.max_retries; ++attempt) {
    std::vector<Vec3> pos;
    pos.reserve(static_cast<std::size_t>(cfg.particles));
    pos.push_back({0.0, 0.0, 0.0});
    if (cfg.particles > 1) {
      const double d = near_contact ? log_uniform(rng, lo, near_hi) : log_uniform(rng, lo, hi);
      pos.push_back(d * random_unit_vector(rng));
    }
    bool ok = true;
    while (ok && static_cast<int>(pos.size()) < cfg.particles) {
      bool placed = false;
      for (int sub = 0; sub < cfg.max_retries; ++sub) {
        std::uniform_int_distribution<int> pick(0, static_cast<int>(pos.size()) - 1);
        const Vec3 anchor = pos[static_cast<std::size_t>(pick(rng))];
        const Vec3 cand = anchor + log_uniform(rng, lo, hi) * random_unit_vector(rng);
        bool clear = true;
        for (const Vec3& p : pos)
          if (norm(cand - p) < lo) { clear = false; break; }
        if (clear) {
          pos.push_back(cand);
          placed = true;
          break;
        }
      }
      if (!placed) ok = false;
    }
    if (!ok) continue;
    const double gap = min_gap_of(pos, a);
    if (near_contact) {
      if (gap <= cfg.near_contact_gap * a) return pos;
    } else {
      if (gap > cfg.near_contact_gap * a) return pos;
    }
  }
  throw GenerationError(std::string("sampler exhausted retries for the ") +
                        (near_contact ? "near-contact" : "separated") +
                        " configuration constraint");
}

}  // namespace

std::vector<TrainingSample> generate_training_set(int count, const SamplerConfig& cfg,
                                                  std::uint64_t seed) {
  if (count <= 0) throw GenerationError("sample count must be positive");
  if (cfg.particles < 1) throw GenerationError("sampler needs at least one particle");
  if (!(cfg.max_extent > 2.0 * cfg.radius + cfg.min_gap * cfg.radius))
    throw GenerationError("max_extent too small for the minimum-gap constraint");

  std::vector<TrainingSample> out(static_cast<std::size_t>(count));
  for (int s = 0; s < count; ++s) {
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(s))));
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::uniform_int_distribution<int> axis(0, 2);

    const bool near_contact = cfg.particles >= 2 && u01(rng) < cfg.near_contact_quota;
    TrainingSample sample;
    sample.domain = Domain::unbounded();
    sample.positions = draw_positions(rng, cfg, near_contact);
    sample.forces.reserve(sample.positions.size());
    for (std::size_t i = 0; i < sample.positions.size(); ++i)
      sample.forces.push_back(basis_force(axis(rng)));

    ParticleSystem system{sample.positions, cfg.radius, cfg.viscosity, sample.domain};
    sample.velocities = oracle_velocities(system, sample.forces, cfg.oracle_order);
    out[static_cast<std::size_t>(s)] = std::move(sample);
  }
  return out;
}

void write_training_csv(const std::string& path, std::span<const TrainingSample> samples) {
  std::ostringstream os;
  const int m = samples.empty() ? 0 : static_cast<int>(samples.front().positions.size());
  os << "sample_id";
  for (int i = 0; i < m; ++i) os << ",x" << i << ",y" << i << ",z" << i;
  for (int i = 0; i < m; ++i) os << ",fx" << i << ",fy" << i << ",fz" << i;
  for (int i = 0; i < m; ++i) os << ",ux" << i << ",uy" << i << ",uz" << i;
  os << "\n";
  for (std::size_t s = 0; s < samples.size(); ++s) {
    const TrainingSample& t = samples[s];
    os << s;
    for (const Vec3& p : t.positions)
      os << ',' << format_g17(p.x) << ',' << format_g17(p.y) << ',' << format_g17(p.z);
    for (const Vec3& f : t.forces)
      os << ',' << format_g17(f.x) << ',' << format_g17(f.y) << ',' << format_g17(f.z);
    for (const Vec3& u : t.velocities)
      os << ',' << format_g17(u.x) << ',' << format_g17(u.y) << ',' << format_g17(u.z);
    os << "\n";
  }
  write_text_file(path, os.str());
}

std::vector<TrainingSample> read_training_csv(const std::string& path, const Domain& domain) {
  const std::string content = read_text_file(path);
  std::istringstream is(content);
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("empty training CSV: " + path);
  const std::size_t columns = split_csv_line(line).size();
  if (columns < 10 || (columns - 1) % 9 != 0)
    throw std::runtime_error("malformed training CSV header in " + path);
  const int m = static_cast<int>((columns - 1) / 9);

  std::vector<TrainingSample> samples;
  int line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != columns)
      throw std::runtime_error(path + ": line " + std::to_string(line_no) + ": expected " +
                               std::to_string(columns) + " columns, got " +
                               std::to_string(cells.size()));
    TrainingSample t;
    t.domain = domain;
    auto value = [&](std::size_t idx) {
      const std::string& cell = cells[idx];
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0')
        throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                                 ": bad numeric field '" + cell + "'");
      return v;
    };
    std::size_t idx = 1;
    for (int i = 0; i < m; ++i) {
      t.positions.push_back({value(idx), value(idx + 1), value(idx + 2)});
      idx += 3;
    }
    for (int i = 0; i < m; ++i) {
      t.forces.push_back({value(idx), value(idx + 1), value(idx + 2)});
      idx += 3;
    }
    for (int i = 0; i < m; ++i) {
      t.velocities.push_back({value(idx), value(idx + 1), value(idx + 2)});
      idx += 3;
    }
    samples.push_back(std::move(t));
  }
  return samples;
}

double near_contact_fraction(std::span<const TrainingSample> samples, double radius,
                             double near_contact_gap) {
  if (samples.empty()) return 0.0;
  std::size_t hits = 0;
  for (const TrainingSample& s : samples)
    if (min_gap_of(s.positions, radius) <= near_contact_gap * radius) ++hits;
  return static_cast<double>(hits) / static_cast<double>(samples.size());
}

}  // namespace hignn
