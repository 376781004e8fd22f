#include "uavnet/scheduler.hpp"

#include "uavnet/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

namespace uavnet
{

namespace
{

constexpr double kInvLn2 = 1.0 / std::numbers::ln2;

/**
 * Surrogate restricted to one slot. Slots share no constraint and no
 * objective term, so the inner problem is solved slot by slot.
 */
class SlotSurrogate
{
public:
  SlotSurrogate(std::size_t n, std::size_t m, std::span<const double> rx,
                std::span<const double> prev, double n0, double eta)
    : n_(n), m_(m), rx_(rx), prev_(prev.begin(), prev.end()), n0_(n0), eta_(eta),
      prev_activity_(activity(prev)), prev_interf_(n * m), prev_noise_(n * m),
      prev_log_noise_(n * m)
  {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < m_; ++j)
        {
          const std::size_t k = i * m_ + j;
          prev_interf_[k] = interference(prev_activity_, i, j);
          prev_noise_[k] = n0_ + prev_interf_[k];
          prev_log_noise_[k] = std::log2(prev_noise_[k]);
        }
  }

  std::vector<double> activity(std::span<const double> a) const
  {
    std::vector<double> s(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < m_; ++j)
        s[i] += a[i * m_ + j];
    return s;
  }

  double interference(const std::vector<double>& s, std::size_t i, std::size_t j) const
  {
    double total = 0.0;
    for (std::size_t p = 0; p < n_; ++p)
      {
        if (p != i)
          total += s[p] * rx_[p * m_ + j];
      }
    return total;
  }

  double value(std::span<const double> a) const
  {
    const auto s = activity(a);
    double total = 0.0;
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < m_; ++j)
        {
          const std::size_t k = i * m_ + j;
          const double interf = interference(s, i, j);
          const double f = std::log2(a[k] * rx_[k] + n0_ + interf);
          const double g =
              prev_log_noise_[k] + kInvLn2 * (interf - prev_interf_[k]) / prev_noise_[k];
          const double pen = a[k] + prev_[k] * prev_[k] - 2.0 * prev_[k] * a[k];
          total += f - g - eta_ * pen;
        }
    return total;
  }

  std::vector<double> gradient(std::span<const double> a) const
  {
    const auto s = activity(a);
    // w[i][j] = 1 / D_ij - 1 / h'_ij and own[i][j] = P_ij / D_ij
    std::vector<double> w(n_ * m_), own(n_ * m_);
    std::vector<double> column_w(m_, 0.0);
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < m_; ++j)
        {
          const std::size_t k = i * m_ + j;
          const double d = a[k] * rx_[k] + n0_ + interference(s, i, j);
          w[k] = 1.0 / d - 1.0 / prev_noise_[k];
          own[k] = rx_[k] / d;
          column_w[j] += w[k];
        }
    std::vector<double> grad(n_ * m_);
    for (std::size_t k = 0; k < n_; ++k)
      {
        double cross = 0.0;
        for (std::size_t j = 0; j < m_; ++j)
          cross += rx_[k * m_ + j] * (column_w[j] - w[k * m_ + j]);
        for (std::size_t l = 0; l < m_; ++l)
          {
            const std::size_t idx = k * m_ + l;
            grad[idx] = kInvLn2 * (own[idx] + cross) - eta_ * (1.0 - 2.0 * prev_[idx]);
          }
      }
    return grad;
  }

  std::size_t rows() const { return n_; }
  std::size_t cols() const { return m_; }

private:
  std::size_t n_;
  std::size_t m_;
  std::span<const double> rx_;
  std::vector<double> prev_;
  double n0_;
  double eta_;
  std::vector<double> prev_activity_;
  std::vector<double> prev_interf_;
  std::vector<double> prev_noise_;
  std::vector<double> prev_log_noise_;
};

double
dot(std::span<const double> a, std::span<const double> b)
{
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

std::vector<double>
along(std::span<const double> x, std::span<const double> d, double step)
{
  std::vector<double> out(x.size());
  for (std::size_t k = 0; k < x.size(); ++k)
    out[k] = std::clamp(x[k] + step * d[k], 0.0, 1.0);
  return out;
}

/// Exact line search of a concave function on [0, max_step] by bisection on its slope.
double
line_search(const SlotSurrogate& s, std::span<const double> x, std::span<const double> d,
            double max_step)
{
  auto slope = [&](double step) { return dot(s.gradient(along(x, d, step)), d); };
  if (slope(max_step) >= 0.0)
    return max_step;
  double lo = 0.0;
  double hi = max_step;
  for (int it = 0; it < 60 && hi - lo > 1e-15 * max_step; ++it)
    {
      const double mid = 0.5 * (lo + hi);
      if (slope(mid) > 0.0)
        lo = mid;
      else
        hi = mid;
    }
  return lo;
}

struct SlotSolve
{
  std::vector<double> x;
  double gap = 0.0;
  int iterations = 0;
  bool exact = true;
};

double
fw_gap(const SlotSurrogate& s, std::span<const double> x)
{
  const auto grad = s.gradient(x);
  const auto vertex = matching_lmo(grad, s.rows(), s.cols()).to_dense(s.cols());
  double gap = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k)
    gap += grad[k] * (vertex[k] - x[k]);
  return gap;
}

/**
 * Pairwise Frank-Wolfe. The iterate is kept as a convex combination of
 * atoms: the starting point plus matchings returned by the oracle. Each step
 * moves weight from the worst active atom to the oracle vertex, so atoms can
 * be dropped exactly and vertex solutions are reached in finitely many steps.
 */
SlotSolve
frank_wolfe(const SlotSurrogate& s, std::span<const double> start, const InnerSolverConfig& config)
{
  SlotSolve out;
  out.x.assign(start.begin(), start.end());
  std::vector<std::vector<double>> atoms{out.x};
  std::vector<double> weights{1.0};

  double current = s.value(out.x);
  std::vector<double> d(out.x.size());
  for (;;)
    {
      const auto grad = s.gradient(out.x);
      auto vertex = matching_lmo(grad, s.rows(), s.cols()).to_dense(s.cols());
      double gap = 0.0;
      for (std::size_t k = 0; k < d.size(); ++k)
        gap += grad[k] * (vertex[k] - out.x[k]);
      out.gap = gap;
      if (gap <= config.gap_tol)
        break;
      if (out.iterations >= config.max_iters)
        {
          out.exact = false;
          break;
        }
      ++out.iterations;

      std::size_t away = 0;
      double away_score = std::numeric_limits<double>::infinity();
      for (std::size_t a = 0; a < atoms.size(); ++a)
        {
          const double score = dot(grad, atoms[a]);
          if (score < away_score)
            {
              away_score = score;
              away = a;
            }
        }
      // Both exits below leave a gap above tolerance that no representable step can close.
      if (atoms[away] == vertex)
        {
          out.exact = false;
          break;
        }
      for (std::size_t k = 0; k < d.size(); ++k)
        d[k] = vertex[k] - atoms[away][k];

      const double max_step = weights[away];
      const double step = line_search(s, out.x, d, max_step);
      auto next = along(out.x, d, step);
      const double value = s.value(next);
      if (!(value >= current) || step <= 0.0)
        {
          out.exact = false;
          break;
        }

      std::size_t target = atoms.size();
      for (std::size_t a = 0; a < atoms.size(); ++a)
        {
          if (atoms[a] == vertex)
            target = a;
        }
      if (target == atoms.size())
        {
          atoms.push_back(std::move(vertex));
          weights.push_back(0.0);
        }
      weights[target] += step;
      if (step >= max_step)
        {
          atoms.erase(atoms.begin() + static_cast<std::ptrdiff_t>(away));
          weights.erase(weights.begin() + static_cast<std::ptrdiff_t>(away));
          // Rebuild from the atoms so dropped weight leaves no residue.
          std::fill(next.begin(), next.end(), 0.0);
          for (std::size_t a = 0; a < atoms.size(); ++a)
            for (std::size_t k = 0; k < next.size(); ++k)
              next[k] += weights[a] * atoms[a][k];
          for (double& v : next)
            v = std::clamp(v, 0.0, 1.0);
        }
      else
        {
          weights[away] -= step;
        }
      out.x = std::move(next);
      current = s.value(out.x);
    }
  return out;
}

void
check_shapes(const Schedule& a, const ReceivedPowers& rx)
{
  if (!a.same_shape(rx))
    throw UsageError("schedule and received-power tensors differ in shape");
}

} // namespace

std::vector<std::string>
DcConfig::violations() const
{
  std::vector<std::string> out;
  if (eta && !(*eta >= 0.0))
    out.emplace_back("eta must be >= 0");
  if (!(eta_growth > 1.0))
    out.emplace_back("eta_growth must be > 1");
  if (eta_max && !(*eta_max >= 0.0))
    out.emplace_back("eta_max must be >= 0");
  if (!(eta_max_factor >= 1.0))
    out.emplace_back("eta_max_factor must be >= 1");
  if (!(epsilon > 0.0))
    out.emplace_back("epsilon must be > 0");
  if (max_dc_iters < 1)
    out.emplace_back("max_dc_iters must be >= 1");
  if (inner.max_iters < 1)
    out.emplace_back("inner.max_iters must be >= 1");
  if (!(inner.gap_tol > 0.0))
    out.emplace_back("inner.gap_tol must be > 0");
  return out;
}

double
penalty(const Schedule& schedule, double eta)
{
  return eta * schedule.binary_residual();
}

AffineTerm
linearize_penalty_term(double a_prev)
{
  return {a_prev * a_prev, -2.0 * a_prev};
}

double
InterferenceTangent::evaluate(const Schedule& schedule) const
{
  double v = constant;
  for (std::size_t p = 0; p < coefficient.size(); ++p)
    v += coefficient[p] * schedule.ugv_activity(p, t);
  return v;
}

InterferenceTangent
linearize_g(const Schedule& schedule_prev, const ReceivedPowers& rx, const ChannelParams& params,
            std::size_t i, std::size_t j, std::size_t t)
{
  check_shapes(schedule_prev, rx);
  const double interf = interference(schedule_prev, rx, i, j, t);
  const double h = interf + params.n0;
  InterferenceTangent g;
  g.i = i;
  g.j = j;
  g.t = t;
  g.coefficient.assign(schedule_prev.ugvs(), 0.0);
  for (std::size_t p = 0; p < schedule_prev.ugvs(); ++p)
    {
      if (p != i)
        g.coefficient[p] = kInvLn2 * rx(p, j, t) / h;
    }
  g.constant = std::log2(h) - kInvLn2 * interf / h;
  return g;
}

double
f_term(const Schedule& schedule, const ReceivedPowers& rx, const ChannelParams& params,
       std::size_t i, std::size_t j, std::size_t t)
{
  return std::log2(schedule.at(i, j, t) * rx(i, j, t) + params.n0 +
                   interference(schedule, rx, i, j, t));
}

double
relaxed_objective(const Schedule& schedule, const ReceivedPowers& rx, const ChannelParams& params,
                  double eta)
{
  return sum_rate(schedule, rx, params) - penalty(schedule, eta);
}

double
surrogate_objective(const Schedule& schedule, const Schedule& schedule_prev,
                    const ReceivedPowers& rx, const ChannelParams& params, double eta)
{
  check_shapes(schedule, rx);
  check_shapes(schedule_prev, rx);
  double total = 0.0;
  for (std::size_t t = 0; t < schedule.slots(); ++t)
    {
      const SlotSurrogate s(schedule.ugvs(), schedule.uavs(), rx.slot(t), schedule_prev.slot(t),
                            params.n0, eta);
      total += s.value(schedule.slot(t));
    }
  return total;
}

double
surrogate_gap(const Schedule& schedule, const Schedule& schedule_prev, const ReceivedPowers& rx,
              const ChannelParams& params, double eta)
{
  double total = 0.0;
  for (std::size_t t = 0; t < schedule.slots(); ++t)
    {
      const SlotSurrogate s(schedule.ugvs(), schedule.uavs(), rx.slot(t), schedule_prev.slot(t),
                            params.n0, eta);
      total += fw_gap(s, schedule.slot(t));
    }
  return total;
}

InnerResult
inner_solve(const Schedule& schedule_prev, const ReceivedPowers& rx, const ChannelParams& params,
            double eta, const InnerSolverConfig& config)
{
  check_shapes(schedule_prev, rx);
  InnerResult out{schedule_prev, 0.0, 0, true};
  for (std::size_t t = 0; t < schedule_prev.slots(); ++t)
    {
      const SlotSurrogate s(schedule_prev.ugvs(), schedule_prev.uavs(), rx.slot(t),
                            schedule_prev.slot(t), params.n0, eta);
      auto slot = frank_wolfe(s, schedule_prev.slot(t), config);
      std::copy(slot.x.begin(), slot.x.end(), out.schedule.slot(t).begin());
      out.gap += slot.gap;
      out.iterations += slot.iterations;
      out.exact = out.exact && slot.exact;
    }
  return out;
}

DcResult
dc_solve(const Schedule& schedule_init, const ReceivedPowers& rx, const ChannelParams& params,
         const DcConfig& config)
{
  check_shapes(schedule_init, rx);
  if (!schedule_init.is_relaxed_feasible(1e-9))
    throw UsageError("dc_solve: initial schedule is not feasible");

  double eta = config.eta ? *config.eta : initial_eta(rx, params);
  const double eta_max = config.eta_max ? std::max(*config.eta_max, eta) : config.eta_max_factor * eta;

  DcResult out;
  out.schedule = schedule_init;
  int stage = 0;
  double previous = relaxed_objective(out.schedule, rx, params, eta);
  out.trace.push_back({stage, eta, previous, out.schedule.binary_residual(), 0.0, 0});

  out.converged = false;
  while (out.iterations < config.max_dc_iters)
    {
      auto inner = inner_solve(out.schedule, rx, params, eta, config.inner);
      ++out.iterations;
      out.inner_exact = out.inner_exact && inner.exact;
      const double objective = relaxed_objective(inner.schedule, rx, params, eta);
      out.schedule = std::move(inner.schedule);
      const double residual = out.schedule.binary_residual();
      out.trace.push_back({stage, eta, objective, residual, inner.gap, inner.iterations});

      const double change = std::abs(objective - previous) / std::max(std::abs(previous), 1e-12);
      previous = objective;
      if (change >= config.epsilon)
        continue;

      // Stage converged: stop once binary, otherwise tighten the penalty.
      if (residual <= config.binary_tol || eta >= eta_max)
        {
          out.converged = true;
          break;
        }
      eta = std::min(eta * config.eta_growth, eta_max);
      ++stage;
      previous = relaxed_objective(out.schedule, rx, params, eta);
      out.trace.push_back({stage, eta, previous, residual, 0.0, 0});
    }
  return out;
}

Schedule
round_schedule(const Schedule& schedule_relaxed, const ReceivedPowers& rx,
               const ChannelParams& params)
{
  check_shapes(schedule_relaxed, rx);
  const std::size_t n = schedule_relaxed.ugvs();
  const std::size_t m = schedule_relaxed.uavs();
  Schedule out(n, m, schedule_relaxed.slots());
  Schedule alt(n, m, schedule_relaxed.slots());
  std::vector<double> closeness(n * m), power(n * m), order(n * m);
  for (std::size_t k = 0; k < n * m; ++k)
    order[k] = -static_cast<double>(k);
  for (std::size_t t = 0; t < schedule_relaxed.slots(); ++t)
    {
      // Maximizing sum x (2a - 1) over matchings x minimizes ||x - a||^2.
      const auto a = schedule_relaxed.slot(t);
      const auto p = rx.slot(t);
      for (std::size_t k = 0; k < n * m; ++k)
        {
          closeness[k] = 2.0 * a[k] - 1.0;
          power[k] = p[k];
        }
      auto dense = matching_lmo_lex(closeness, power, order, n, m).to_dense(m);
      std::copy(dense.begin(), dense.end(), out.slot(t).begin());

      std::copy(a.begin(), a.end(), closeness.begin());
      dense = matching_lmo_lex(closeness, power, order, n, m).to_dense(m);
      std::copy(dense.begin(), dense.end(), alt.slot(t).begin());
      if (slot_rate(alt, rx, params, t) > slot_rate(out, rx, params, t))
        std::copy(dense.begin(), dense.end(), out.slot(t).begin());
    }
  return out;
}

Schedule
random_feasible_schedule(std::size_t n, std::size_t m, std::size_t t, std::uint64_t seed)
{
  Schedule out(n, m, t);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (double& a : out.values())
    a = unit(rng);
  for (std::size_t s = 0; s < t; ++s)
    {
      double scale = 1.0;
      for (std::size_t i = 0; i < n; ++i)
        scale = std::max(scale, out.ugv_activity(i, s));
      for (std::size_t j = 0; j < m; ++j)
        {
          double col = 0.0;
          for (std::size_t i = 0; i < n; ++i)
            col += out(i, j, s);
          scale = std::max(scale, col);
        }
      for (double& a : out.slot(s))
        a /= scale;
    }
  return out;
}

Schedule
greedy_schedule(const ReceivedPowers& rx, const ChannelParams& params)
{
  const std::size_t n = rx.ugvs();
  const std::size_t m = rx.uavs();
  Schedule out(n, m, rx.slots());
  std::vector<std::size_t> order(n * m);
  for (std::size_t t = 0; t < rx.slots(); ++t)
    {
      const auto p = rx.slot(t);
      std::iota(order.begin(), order.end(), std::size_t{0});
      std::stable_sort(order.begin(), order.end(),
                       [&p](std::size_t a, std::size_t b) { return p[a] > p[b]; });
      std::vector<char> row_used(n, 0), col_used(m, 0);
      double current = 0.0;
      for (std::size_t k : order)
        {
          const std::size_t i = k / m;
          const std::size_t j = k % m;
          if (row_used[i] || col_used[j])
            continue;
          out(i, j, t) = 1.0;
          const double candidate = slot_rate(out, rx, params, t);
          if (candidate > current)
            {
              current = candidate;
              row_used[i] = 1;
              col_used[j] = 1;
            }
          else
            {
              out(i, j, t) = 0.0;
            }
        }
    }
  return out;
}

double
initial_eta(const ReceivedPowers& rx, const ChannelParams& params)
{
  const double entries = static_cast<double>(rx.ugvs() * rx.uavs() * rx.slots());
  const double greedy = sum_rate(greedy_schedule(rx, params), rx, params);
  return greedy > 0.0 && entries > 0.0 ? greedy / entries : 1.0;
}

} // namespace uavnet
