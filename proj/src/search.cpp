#include "tvroute/search.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <queue>
#include <sstream>

namespace tvroute {

double calc_path_dir(Vec2 p_from, Vec2 p_to) {
  const Vec2 d = p_to - p_from;
  return std::atan2(d.y, d.x);
}

bool angle_within(double a, double b, double tol) {
  return std::abs(wrap_angle(a - b)) < tol;
}

namespace {

// Heading that holds the ground track `dir` against the given current, or
// nothing when the cross-track drift exceeds the vehicle speed.
std::optional<double> crab_heading(Vec2 dir, FlowSample current, double v_veh) {
  const Vec2 w{current.u, current.v};
  const double along = dot(w, dir);
  const double cross = dir.x * w.y - dir.y * w.x;  // left-of-track positive
  if (std::abs(cross) >= v_veh) return std::nullopt;
  const double heading_offset = std::asin(-cross / v_veh);
  // Reject configurations that cancel the drift but still lose ground.
  if (v_veh * std::cos(heading_offset) + along <= 0.0) return std::nullopt;
  return calc_path_dir({0, 0}, dir) + heading_offset;
}

}  // namespace

OptDirection calc_opt_dir(Vec2 p_pred, Vec2 p_u, double t_depart, double t_arrive,
                          const FlowField& field, const ParameterSet& set,
                          const TransitConfig& cfg) {
  const Vec2 delta = p_u - p_pred;
  const double length = norm(delta);
  const Vec2 dir = delta * (1.0 / length);
  const double v_veh = perturb_speed(cfg.v_veh, set);

  const FlowSample start_flow = perturb_flow(field.sample(p_pred.x, p_pred.y, t_depart), set);
  const std::optional<double> theta0 = crab_heading(dir, start_flow, v_veh);
  if (!theta0) return {calc_path_dir(p_pred, p_u), true};

  // Evolve the heading along the straight track, explicit Euler.
  const double dt = (t_arrive - t_depart) / cfg.n_seg;
  const double seg_len = length / cfg.n_seg;
  double theta = *theta0;
  double t = t_depart;
  for (int i = 0; i < cfg.n_seg; ++i) {
    const Vec2 mid = p_pred + dir * (seg_len * (i + 0.5));
    FlowJacobian jac = flow_jacobian(field, mid.x, mid.y, t);
    jac.du_dx *= (1.0 + set.sign_u * set.var_u);
    jac.du_dy *= (1.0 + set.sign_u * set.var_u);
    jac.dv_dx *= (1.0 + set.sign_v * set.var_v);
    jac.dv_dy *= (1.0 + set.sign_v * set.var_v);
    const double sin_t = std::sin(theta);
    const double cos_t = std::cos(theta);
    const double rate = sin_t * sin_t * jac.dv_dx + sin_t * cos_t * (jac.du_dx - jac.dv_dy) -
                        cos_t * cos_t * jac.du_dy;
    theta += rate * dt;
    t += dt;
  }

  const FlowSample end_flow = perturb_flow(field.sample(p_u.x, p_u.y, t_arrive), set);
  const double gx = v_veh * std::cos(theta) + end_flow.u;
  const double gy = v_veh * std::sin(theta) + end_flow.v;
  return {std::atan2(gy, gx), false};
}

OptDirectionSet calc_unc_opt_dir(Vec2 p_pred, Vec2 p_u, const CostInterval& pred_interval,
                                 const CostInterval& u_interval, const FlowField& field,
                                 const UncertaintyDomain& domain, const TransitConfig& cfg) {
  OptDirectionSet out;
  const std::vector<ParameterSet> sets = corner_sets(domain);
  const bool degenerate_times = pred_interval.degenerate() && u_interval.degenerate();
  out.angles.reserve(sets.size() * (degenerate_times ? 1 : 2));
  for (const ParameterSet& set : sets) {
    const OptDirection lo =
        calc_opt_dir(p_pred, p_u, pred_interval.lo, u_interval.lo, field, set, cfg);
    out.angles.push_back(lo.angle);
    out.degenerate = out.degenerate || lo.degenerate;
    if (degenerate_times) continue;
    const OptDirection hi =
        calc_opt_dir(p_pred, p_u, pred_interval.hi, u_interval.hi, field, set, cfg);
    out.angles.push_back(hi.angle);
    out.degenerate = out.degenerate || hi.degenerate;
  }
  return out;
}

std::vector<std::int32_t> reconstruct_path(const std::vector<VertexLabel>& labels,
                                           std::int32_t s, std::int32_t g) {
  if (!std::isfinite(labels[static_cast<std::size_t>(g)].interval.hi))
    throw ConfigError("reconstruct_path: goal vertex was not reached");
  std::vector<std::int32_t> path;
  for (std::int32_t v = g; v != -1; v = labels[static_cast<std::size_t>(v)].pred) {
    path.push_back(v);
    if (v == s) break;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

namespace {

struct QueueEntry {
  double f;
  std::uint64_t seq;
  std::int32_t vertex;
};

struct QueueOrder {
  // Min-heap on f; ties extract in insertion order.
  bool operator()(const QueueEntry& a, const QueueEntry& b) const {
    if (a.f != b.f) return a.f > b.f;
    return a.seq > b.seq;
  }
};

// Per-successor scratch for the gather phase of one loop iteration.
struct EdgeEval {
  bool relaxable = false;
  CostInterval arrival;
};

}  // namespace

SearchResult search(const GridGraph& graph, const FlowField& field, int source,
                    const SearchConfig& cfg) {
  cfg.transit.validate();
  if (source < 0 || source >= graph.vertex_count())
    throw ConfigError("search: source vertex out of range");
  if ((cfg.heuristic || cfg.gating) && cfg.goal < 0)
    throw ConfigError("search: heuristic and gating modes require a goal vertex");
  if (cfg.goal >= graph.vertex_count())
    throw ConfigError("search: goal vertex out of range");
  if (!(cfg.delta_phi_max > 0.0 && cfg.delta_phi_max <= kPi))
    throw ConfigError("search: delta_phi_max must lie in (0, pi]");
  // Surface non-positive perturbed speeds before the main loop.
  const std::vector<ParameterSet> sets =
      cfg.robust ? corner_sets(cfg.uncertainty) : std::vector<ParameterSet>{ParameterSet{}};
  for (const ParameterSet& set : sets) perturb_speed(cfg.transit.v_veh, set);
  const ParameterSet nominal{};

  const CallCounters counters_before = field.counters()->snapshot();
  const bool early_exit = cfg.heuristic || cfg.gating;
  // A half-turn tolerance admits every direction; skip the gate entirely so
  // the gated variants coincide with their ungated twins exactly.
  const bool gate_active = cfg.gating && cfg.delta_phi_max < kPi;

  SearchResult res;
  res.labels.assign(static_cast<std::size_t>(graph.vertex_count()), VertexLabel{});
  std::vector<VertexLabel>& labels = res.labels;

  auto h = [&](std::int32_t v) {
    return cfg.heuristic ? heuristic_h(graph.position(v), graph.position(cfg.goal),
                                       cfg.h_v_veh, cfg.h_v_c_max)
                         : 0.0;
  };

  std::priority_queue<QueueEntry, std::vector<QueueEntry>, QueueOrder> queue;
  std::uint64_t next_seq = 1;
  auto enqueue = [&](std::int32_t v) {
    labels[static_cast<std::size_t>(v)].queue_seq = next_seq;
    queue.push({labels[static_cast<std::size_t>(v)].f, next_seq, v});
    ++next_seq;
  };

  VertexLabel& src = labels[static_cast<std::size_t>(source)];
  src.color = Color::Gray;
  src.interval = {cfg.t0, cfg.t0};
  src.f = cfg.t0 + h(source);
  enqueue(source);

  std::vector<EdgeEval> evals;
  while (!queue.empty()) {
    const QueueEntry entry = queue.top();
    queue.pop();
    const std::int32_t u = entry.vertex;
    VertexLabel& lu = labels[static_cast<std::size_t>(u)];
    if (lu.color != Color::Gray || entry.seq != lu.queue_seq) continue;  // stale

    if (early_exit && u == cfg.goal) {
      res.reached = true;
      break;
    }
    lu.color = Color::Black;
    res.extraction_order.push_back(u);

    // Optimal outgoing directions for the gate, once per extracted vertex.
    OptDirectionSet opt_dirs;
    bool gate_this_vertex = gate_active && u != source;
    if (gate_this_vertex) {
      const Vec2 p_pred = graph.position(lu.pred);
      const Vec2 p_u = graph.position(u);
      if (cfg.robust) {
        opt_dirs = calc_unc_opt_dir(p_pred, p_u, labels[static_cast<std::size_t>(lu.pred)].interval,
                                    lu.interval, field, cfg.uncertainty, cfg.transit);
      } else {
        const OptDirection d =
            calc_opt_dir(p_pred, p_u, labels[static_cast<std::size_t>(lu.pred)].interval.hi,
                         lu.interval.hi, field, nominal, cfg.transit);
        opt_dirs.angles.push_back(d.angle);
        opt_dirs.degenerate = d.degenerate;
      }
      // Degenerate direction estimates fall back to ungated admission.
      if (opt_dirs.degenerate) gate_this_vertex = false;
    }

    const std::span<const std::int32_t> adj = graph.successors(u);
    const int n_adj = static_cast<int>(adj.size());
    evals.assign(static_cast<std::size_t>(n_adj), EdgeEval{});

    // Gather: evaluate admissible successor edges. Labels are read-only here,
    // so the parallel and serial routes see identical state; commits below are
    // sequential in ascending successor id.
    auto eval_one = [&](const FlowField& f, int i) {
      const std::int32_t v = adj[static_cast<std::size_t>(i)];
      const VertexLabel& lv = labels[static_cast<std::size_t>(v)];
      if (!(lu.interval.hi < lv.interval.hi)) return;
      const Vec2 p_u = graph.position(u);
      const Vec2 p_v = graph.position(v);
      if (gate_this_vertex) {
        const double phi_path = calc_path_dir(p_u, p_v);
        const bool admitted =
            std::any_of(opt_dirs.angles.begin(), opt_dirs.angles.end(), [&](double phi_opt) {
              return angle_within(phi_opt, phi_path, cfg.delta_phi_max);
            });
        if (!admitted) return;
      }
      if (cfg.robust) {
        // The search parallelizes across successor edges; the cost grid under
        // each edge stays on the serial route.
        const std::optional<CostInterval> arrival = robust_edge_cost(
            p_u, p_v, lu.interval, f, cfg.uncertainty, cfg.transit, ExecPolicy{});
        if (!arrival) return;
        evals[static_cast<std::size_t>(i)] = {true, *arrival};
      } else {
        const std::optional<double> duration =
            edge_transit_time(p_u, p_v, lu.interval.hi, f, nominal, cfg.transit);
        if (!duration) return;
        const double arrival = lu.interval.hi + *duration;
        evals[static_cast<std::size_t>(i)] = {true, {arrival, arrival}};
      }
    };
    if (cfg.exec.parallel()) {
#pragma omp parallel num_threads(cfg.exec.threads)
      {
        // Per-worker counter tally merged by summation; totals match the
        // serial route exactly. Dynamic split: gated or settled successors
        // cost nothing, admitted ones run a full cost grid.
        const FlowField local_field = field.with_counters(make_counter_block());
#pragma omp for schedule(dynamic) nowait
        for (int i = 0; i < n_adj; ++i) eval_one(local_field, i);
        const CallCounters tally = local_field.counters()->snapshot();
        field.counters()->add_rcfc(tally.rcfc);
        field.counters()->add_cfc(tally.cfc);
        field.counters()->add_cmc(tally.cmc);
      }
    } else {
      for (int i = 0; i < n_adj; ++i) eval_one(field, i);
    }

    // Commit phase: relaxations in ascending successor id.
    for (int i = 0; i < n_adj; ++i) {
      const EdgeEval& ev = evals[static_cast<std::size_t>(i)];
      if (!ev.relaxable) continue;
      const std::int32_t v = adj[static_cast<std::size_t>(i)];
      VertexLabel& lv = labels[static_cast<std::size_t>(v)];
      if (!(ev.arrival.hi < lv.interval.hi)) continue;
      lv.interval = ev.arrival;
      lv.f = ev.arrival.hi + h(v);
      lv.pred = u;
      if (lv.color == Color::Gray) {
        enqueue(v);  // decrease-key via re-insertion; older entries go stale
      } else {
        if (lv.color == Color::Black) ++res.black_reopens;
        lv.color = Color::Gray;
        enqueue(v);
      }
    }
  }

  if (!early_exit && cfg.goal >= 0)
    res.reached = std::isfinite(labels[static_cast<std::size_t>(cfg.goal)].interval.hi);
  if (res.reached) {
    res.path = reconstruct_path(labels, source, cfg.goal);
    res.path_intervals.reserve(res.path.size());
    for (std::int32_t v : res.path)
      res.path_intervals.push_back(labels[static_cast<std::size_t>(v)].interval);
  }
  res.counters = field.counters()->snapshot() - counters_before;
  return res;
}

}  // namespace tvroute
