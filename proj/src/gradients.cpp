#include "hignn/gradients.hpp"

#include <Eigen/Dense>

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace hignn {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Fixed work-unit size: results are reduced in chunk order, so the math never
// depends on how many workers pick chunks up.
constexpr std::size_t kChunkSamples = 128;

// Parameters and gradient accumulators live in Eigen-owned (64-byte aligned)
// storage while inside the batched kernels. Mapping the raw std::vector
// buffers directly would let the GEMM kernels branch on incidental heap
// alignment, breaking bitwise reproducibility across runs and worker counts.
struct AlignedMlp {
  std::vector<RowMat> w;
  std::vector<Eigen::RowVectorXd> b;
};

AlignedMlp to_aligned(const MlpParams& p) {
  AlignedMlp a;
  a.w.reserve(p.layers.size());
  a.b.reserve(p.layers.size());
  for (const MlpLayer& l : p.layers) {
    a.w.push_back(Eigen::Map<const RowMat>(l.w.data(), l.out, l.in));
    a.b.push_back(Eigen::Map<const Eigen::RowVectorXd>(l.b.data(), l.out));
  }
  return a;
}

AlignedMlp aligned_zeros(const MlpParams& p) {
  AlignedMlp a;
  for (const MlpLayer& l : p.layers) {
    a.w.push_back(RowMat::Zero(l.out, l.in));
    a.b.push_back(Eigen::RowVectorXd::Zero(l.out));
  }
  return a;
}

void aligned_add(AlignedMlp& into, const AlignedMlp& from) {
  for (std::size_t i = 0; i < into.w.size(); ++i) {
    into.w[i] += from.w[i];
    into.b[i] += from.b[i];
  }
}

void aligned_store(const AlignedMlp& a, MlpParams& out) {
  for (std::size_t i = 0; i < a.w.size(); ++i) {
    Eigen::Map<RowMat>(out.layers[i].w.data(), a.w[i].rows(), a.w[i].cols()) = a.w[i];
    Eigen::Map<Eigen::RowVectorXd>(out.layers[i].b.data(), a.b[i].cols()) = a.b[i];
  }
}

/// acts[0] = inputs; acts[i + 1] = output of layer i (tanh on hidden layers,
/// identity on the last).
void mlp_stack_forward(const AlignedMlp& p, RowMat inputs, std::vector<RowMat>& acts) {
  acts.clear();
  acts.reserve(p.w.size() + 1);
  acts.push_back(std::move(inputs));
  for (std::size_t li = 0; li < p.w.size(); ++li) {
    RowMat z = acts.back() * p.w[li].transpose();
    z.rowwise() += p.b[li];
    if (li + 1 < p.w.size()) z = z.array().tanh().matrix();
    acts.push_back(std::move(z));
  }
}

/// dz: gradient w.r.t. the final linear output; accumulates into grad.
void mlp_stack_backward(const AlignedMlp& p, const std::vector<RowMat>& acts, RowMat dz,
                        AlignedMlp& grad) {
  for (std::size_t li = p.w.size(); li-- > 0;) {
    grad.w[li].noalias() += dz.transpose() * acts[li];
    grad.b[li] += dz.colwise().sum();
    if (li > 0) {
      RowMat da = dz * p.w[li];
      // acts[li] is the tanh output of layer li-1
      dz = (da.array() * (1.0 - acts[li].array().square())).matrix();
    }
  }
}

struct ChunkAccum {
  double loss_sum = 0.0;
  std::size_t terms = 0;
  AlignedMlp grad_h, grad_g;
};

void process_chunk(std::span<const CompiledSample> samples, std::span<const std::size_t> idx,
                   const AlignedMlp& h_params, const AlignedMlp& g_params, bool with_grads,
                   ChunkAccum& out) {
  std::size_t n_edges = 0, n_faces = 0, n_particles = 0;
  for (std::size_t i : idx) {
    n_edges += samples[i].edge_target.size();
    n_faces += samples[i].face_target.size();
    n_particles += static_cast<std::size_t>(samples[i].n_particles);
  }

  RowMat edge_in(n_edges, 3), face_in(n_faces, 6);
  std::vector<const double*> edge_f(n_edges), face_f(n_faces);
  std::vector<std::size_t> edge_t(n_edges), face_t(n_faces);
  std::vector<Vec3> u_pred(n_particles);
  std::vector<const CompiledSample*> sample_of(idx.size());

  std::size_t e = 0, f = 0, base = 0;
  std::vector<std::size_t> particle_base(idx.size());
  for (std::size_t si = 0; si < idx.size(); ++si) {
    const CompiledSample& s = samples[idx[si]];
    sample_of[si] = &s;
    particle_base[si] = base;
    for (std::size_t k = 0; k < s.edge_target.size(); ++k) {
      edge_in(static_cast<Eigen::Index>(e), 0) = s.edge_in[3 * k];
      edge_in(static_cast<Eigen::Index>(e), 1) = s.edge_in[3 * k + 1];
      edge_in(static_cast<Eigen::Index>(e), 2) = s.edge_in[3 * k + 2];
      edge_f[e] = s.edge_force.data() + 6 * k;
      edge_t[e] = base + static_cast<std::size_t>(s.edge_target[k]);
      ++e;
    }
    for (std::size_t k = 0; k < s.face_target.size(); ++k) {
      for (int c = 0; c < 6; ++c)
        face_in(static_cast<Eigen::Index>(f), c) = s.face_in[6 * k + static_cast<std::size_t>(c)];
      face_f[f] = s.face_force.data() + 6 * k;
      face_t[f] = base + static_cast<std::size_t>(s.face_target[k]);
      ++f;
    }
    for (int k = 0; k < s.n_particles; ++k)
      u_pred[base + static_cast<std::size_t>(k)] = s.u_base[static_cast<std::size_t>(k)];
    base += static_cast<std::size_t>(s.n_particles);
  }

  std::vector<RowMat> acts_h, acts_g;
  mlp_stack_forward(h_params, std::move(edge_in), acts_h);
  if (n_faces > 0) mlp_stack_forward(g_params, std::move(face_in), acts_g);

  const RowMat& out_h = acts_h.back();
  for (std::size_t k = 0; k < n_edges; ++k) {
    const double* m = out_h.data() + 18 * k;
    const double* ff = edge_f[k];
    Vec3& u = u_pred[edge_t[k]];
    for (int r = 0; r < 3; ++r) {
      double acc = 0.0;
      for (int c = 0; c < 6; ++c) acc += m[6 * r + c] * ff[c];
      (&u.x)[r] += acc;
    }
  }
  if (n_faces > 0) {
    const RowMat& out_g = acts_g.back();
    for (std::size_t k = 0; k < n_faces; ++k) {
      const double* m = out_g.data() + 18 * k;
      const double* ff = face_f[k];
      Vec3& u = u_pred[face_t[k]];
      for (int r = 0; r < 3; ++r) {
        double acc = 0.0;
        for (int c = 0; c < 6; ++c) acc += m[6 * r + c] * ff[c];
        (&u.x)[r] += acc;
      }
    }
  }

  // loss terms and dL/dU (unnormalized; the caller divides by the term count)
  std::vector<Vec3> du(with_grads ? n_particles : 0);
  for (std::size_t si = 0; si < idx.size(); ++si) {
    const CompiledSample& s = *sample_of[si];
    for (int k = 0; k < s.n_particles; ++k) {
      const std::size_t pi = particle_base[si] + static_cast<std::size_t>(k);
      const Vec3 diff = u_pred[pi] - s.u_true[static_cast<std::size_t>(k)];
      const double denom = s.denom[static_cast<std::size_t>(k)];
      out.loss_sum += norm_sq(diff) / denom;
      if (with_grads) du[pi] = (2.0 / denom) * diff;
      ++out.terms;
    }
  }
  if (!with_grads) return;

  RowMat dout_h(n_edges, 18);
  for (std::size_t k = 0; k < n_edges; ++k) {
    const Vec3& g = du[edge_t[k]];
    const double* ff = edge_f[k];
    double* row = dout_h.data() + 18 * k;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 6; ++c) row[6 * r + c] = (&g.x)[r] * ff[c];
  }
  mlp_stack_backward(h_params, acts_h, std::move(dout_h), out.grad_h);

  if (n_faces > 0) {
    RowMat dout_g(n_faces, 18);
    for (std::size_t k = 0; k < n_faces; ++k) {
      const Vec3& g = du[face_t[k]];
      const double* ff = face_f[k];
      double* row = dout_g.data() + 18 * k;
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 6; ++c) row[6 * r + c] = (&g.x)[r] * ff[c];
    }
    mlp_stack_backward(g_params, acts_g, std::move(dout_g), out.grad_g);
  }
}

BatchResult run_chunks(std::span<const CompiledSample> samples,
                       std::span<const std::size_t> indices, const SurrogateParams& params,
                       int n_workers, bool with_grads) {
  const std::size_t n = indices.size();
  const std::size_t n_chunks = (n + kChunkSamples - 1) / kChunkSamples;

  const AlignedMlp h_aligned = to_aligned(params.h_theta2);
  const AlignedMlp g_aligned = to_aligned(params.g_theta3);

  std::vector<ChunkAccum> results(std::max<std::size_t>(n_chunks, 1));
  for (ChunkAccum& r : results) {
    if (with_grads) {
      r.grad_h = aligned_zeros(params.h_theta2);
      r.grad_g = aligned_zeros(params.g_theta3);
    }
  }

  auto run_one = [&](std::size_t c) {
    const std::size_t lo = c * kChunkSamples;
    const std::size_t hi = std::min(n, lo + kChunkSamples);
    process_chunk(samples, indices.subspan(lo, hi - lo), h_aligned, g_aligned, with_grads,
                  results[c]);
  };

  const int threads = std::min<int>(n_workers, static_cast<int>(n_chunks));
  if (threads <= 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) run_one(c);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int w = 0; w < threads; ++w)
      pool.emplace_back([&, w] {
        try {
          while (true) {
            const std::size_t c = next.fetch_add(1);
            if (c >= n_chunks) break;
            run_one(c);
          }
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    for (std::thread& t : pool) t.join();
    for (const std::exception_ptr& e : errors)
      if (e) std::rethrow_exception(e);
  }

  BatchResult out;
  if (with_grads) {
    AlignedMlp total_h = aligned_zeros(params.h_theta2);
    AlignedMlp total_g = aligned_zeros(params.g_theta3);
    for (const ChunkAccum& r : results) {
      out.loss_sum += r.loss_sum;
      out.term_count += r.terms;
      aligned_add(total_h, r.grad_h);
      aligned_add(total_g, r.grad_g);
    }
    out.grad_h = zeros_like(params.h_theta2);
    out.grad_g = zeros_like(params.g_theta3);
    aligned_store(total_h, out.grad_h);
    aligned_store(total_g, out.grad_g);
  } else {
    for (const ChunkAccum& r : results) {
      out.loss_sum += r.loss_sum;
      out.term_count += r.terms;
    }
  }
  return out;
}

}  // namespace

CompiledSample compile_sample(const TrainingSample& sample, const Vec3& alpha1_diag,
                              double face_r_cut, double delta) {
  const std::size_t m = sample.positions.size();
  if (sample.forces.size() != m || sample.velocities.size() != m)
    throw std::invalid_argument("training sample: positions/forces/velocities size mismatch");

  CompiledSample c;
  c.n_particles = static_cast<int>(m);
  c.u_base.resize(m);
  c.u_true = sample.velocities;
  c.denom.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    const Vec3& fi = sample.forces[i];
    c.u_base[i] = {alpha1_diag.x * fi.x, alpha1_diag.y * fi.y, alpha1_diag.z * fi.z};
    c.denom[i] = std::max(norm_sq(sample.velocities[i]), delta);
  }

  const HiGraph graph = build_graph(sample.positions, sample.domain, face_r_cut);
  c.edge_target.reserve(graph.edges.size());
  for (const auto& [t, s] : graph.edges) {
    const Vec3 rel = sample.domain.displacement(sample.positions[static_cast<std::size_t>(t)],
                                                sample.positions[static_cast<std::size_t>(s)]);
    c.edge_in.insert(c.edge_in.end(), {rel.x, rel.y, rel.z});
    const auto ff = stacked_pair(sample.forces[static_cast<std::size_t>(t)],
                                 sample.forces[static_cast<std::size_t>(s)]);
    c.edge_force.insert(c.edge_force.end(), ff.begin(), ff.end());
    c.edge_target.push_back(t);
  }
  c.face_target.reserve(graph.faces.size());
  for (const auto& [t, k, s] : graph.faces) {
    const Vec3 rel_s = sample.domain.displacement(sample.positions[static_cast<std::size_t>(t)],
                                                  sample.positions[static_cast<std::size_t>(s)]);
    const Vec3 rel_k = sample.domain.displacement(sample.positions[static_cast<std::size_t>(t)],
                                                  sample.positions[static_cast<std::size_t>(k)]);
    c.face_in.insert(c.face_in.end(), {rel_s.x, rel_s.y, rel_s.z, rel_k.x, rel_k.y, rel_k.z});
    const auto ff = stacked_pair(sample.forces[static_cast<std::size_t>(t)],
                                 sample.forces[static_cast<std::size_t>(s)]);
    c.face_force.insert(c.face_force.end(), ff.begin(), ff.end());
    c.face_target.push_back(t);
  }
  return c;
}

std::vector<CompiledSample> compile_dataset(std::span<const TrainingSample> samples,
                                            const Vec3& alpha1_diag, double face_r_cut,
                                            double delta) {
  std::vector<CompiledSample> out;
  out.reserve(samples.size());
  for (const TrainingSample& s : samples)
    out.push_back(compile_sample(s, alpha1_diag, face_r_cut, delta));
  return out;
}

BatchResult batch_gradients(std::span<const CompiledSample> samples,
                            std::span<const std::size_t> indices, const SurrogateParams& params,
                            int n_workers) {
  return run_chunks(samples, indices, params, n_workers, true);
}

std::pair<double, std::size_t> batch_loss(std::span<const CompiledSample> samples,
                                          std::span<const std::size_t> indices,
                                          const SurrogateParams& params, int n_workers) {
  const BatchResult r = run_chunks(samples, indices, params, n_workers, false);
  return {r.loss_sum, r.term_count};
}

GradResult hignn_gradients(std::span<const TrainingSample> batch, const SurrogateParams& params,
                           double delta, int n_workers) {
  if (batch.empty()) throw std::invalid_argument("hignn_gradients: empty batch");
  const std::vector<CompiledSample> compiled =
      compile_dataset(batch, params.alpha1_diag, params.face_r_cut, delta);
  std::vector<std::size_t> indices(compiled.size());
  for (std::size_t i = 0; i < indices.size(); ++i) indices[i] = i;
  BatchResult r = batch_gradients(compiled, indices, params, n_workers);

  GradResult g;
  g.term_count = r.term_count;
  const double scale = 1.0 / static_cast<double>(r.term_count);
  g.loss = r.loss_sum * scale;
  g.grad_h = std::move(r.grad_h);
  g.grad_g = std::move(r.grad_g);
  for (MlpParams* mp : {&g.grad_h, &g.grad_g})
    for (MlpLayer& l : mp->layers) {
      for (double& v : l.w) v *= scale;
      for (double& v : l.b) v *= scale;
    }
  return g;
}

}  // namespace hignn
