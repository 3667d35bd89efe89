#include "vanetsim/simulation.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>
#include <unordered_map>

namespace vanetsim {

std::vector<PairSchedule> draw_pairs(int pair_count, const std::vector<VehicleId>& vehicles,
                                     Rng& rng) {
    if (vehicles.size() < 2)
        throw std::invalid_argument("need at least two vehicles for a pair");
    std::vector<PairSchedule> out;
    out.reserve(static_cast<std::size_t>(pair_count));
    for (int i = 0; i < pair_count; ++i) {
        const VehicleId src = vehicles[rng.uniform_index(vehicles.size())];
        VehicleId dst = src;
        while (dst == src)
            dst = vehicles[rng.uniform_index(vehicles.size())];
        out.push_back({src, dst});
    }
    return out;
}

namespace {

TracePlayback load_trace(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open trace file: " + path);
    return ingest_trace(in);
}

}  // namespace

CostMatrix learn_costs(const StreetGraph& graph, const SimConfig& cfg,
                       std::vector<double>* p_final) {
    Rng select_rng = Rng::substream(cfg.seed, "learning-select");
    LearningOptions opts;
    opts.reward_step = cfg.learn_a;
    opts.penalty_step = cfg.learn_b;
    opts.iterations = cfg.learn_iterations;
    opts.tx_range = cfg.radio.tx_range;

    if (!cfg.trace_file.empty()) {
        const TracePlayback trace = load_trace(cfg.trace_file);
        double t = 0.0;
        const DensityQuery density = [&](StreetId s) {
            const auto states = trace.states_at(graph, t, cfg.radio.street_tol);
            t += cfg.mobility.dt;
            return count_vehicles_per_street(states, graph, cfg.radio.street_tol)
                .at(static_cast<std::size_t>(s));
        };
        return run_learning_phase(graph, density, opts, select_rng, p_final);
    }

    Rng mob_rng = Rng::substream(cfg.seed, "learning-mobility");
    auto states = place_random(graph, cfg.vehicles, cfg.mobility, mob_rng);
    const DensityQuery density = [&](StreetId s) {
        step_synthetic(states, graph, cfg.mobility.dt, cfg.mobility, mob_rng);
        return count_vehicles_per_street(states, graph, cfg.radio.street_tol)
            .at(static_cast<std::size_t>(s));
    };
    return run_learning_phase(graph, density, opts, select_rng, p_final);
}

namespace {

struct InFlight {
    Packet pkt;
    int pair;
    VehicleId at = -1;
    bool buffered = false;
    double buffered_since = 0.0;
};

class Simulation {
  public:
    Simulation(const StreetGraph& graph, const SimConfig& cfg, Protocol protocol,
               const CostMatrix* costs)
        : graph_(graph), cfg_(cfg), protocol_(protocol), costs_(costs) {
        if (protocol_ == Protocol::kPbla && !costs_)
            throw std::invalid_argument("pbla run requires a learned cost matrix");

        Rng mob_rng = Rng::substream(cfg.seed, "mobility");
        if (!cfg.trace_file.empty()) {
            trace_ = load_trace(cfg.trace_file);
            states_ = trace_->states_at(graph_, 0.0, cfg.radio.street_tol);
        } else {
            states_ = place_random(graph_, cfg.vehicles, cfg.mobility, mob_rng);
        }
        mob_rng_ = std::make_unique<Rng>(std::move(mob_rng));
        for (std::size_t i = 0; i < states_.size(); ++i)
            index_of_[states_[i].id] = i;
        tables_.resize(states_.size());
        refresh_sites();

        std::vector<VehicleId> ids;
        ids.reserve(states_.size());
        for (const auto& s : states_)
            ids.push_back(s.id);
        Rng pair_rng = Rng::substream(cfg.seed, "pairs");
        pairs_ = draw_pairs(cfg.pairs, ids, pair_rng);
        metrics_.resize(pairs_.size());
        for (std::size_t i = 0; i < pairs_.size(); ++i)
            metrics_[i].pair = static_cast<int>(i);
    }

    RunResult run() {
        schedule_all();
        while (const auto ev = queue_.pop_next())
            dispatch(*ev);
        RunResult result{protocol_, cfg_.seed, metrics_};
        return result;
    }

  private:
    void schedule_all() {
        for (double t = cfg_.mobility.dt; t <= cfg_.duration; t += cfg_.mobility.dt)
            queue_.schedule(t, EventKind::kMobilityTick);
        for (double t = 0.0; t <= cfg_.duration; t += cfg_.beacon_period)
            queue_.schedule(t, EventKind::kBeacon);
        for (std::size_t i = 0; i < pairs_.size(); ++i)
            for (double t = cfg_.emission_start; t < cfg_.duration; t += cfg_.emission_interval)
                queue_.schedule(t, EventKind::kPacketOrigination, static_cast<std::int64_t>(i));
    }

    void dispatch(const Event& ev) {
        switch (ev.kind) {
            case EventKind::kMobilityTick:
                if (trace_) {
                    states_ = trace_->states_at(graph_, ev.time, cfg_.radio.street_tol);
                } else {
                    step_synthetic(states_, graph_, cfg_.mobility.dt, cfg_.mobility, *mob_rng_);
                }
                refresh_sites();
                break;
            case EventKind::kBeacon:
                emit_beacons(ev.time, states_, sites_, graph_, cfg_.radio, tables_);
                retry_buffered(ev.time);
                break;
            case EventKind::kPacketOrigination:
                originate(static_cast<int>(ev.payload), ev.time);
                break;
            case EventKind::kPacketArrival: {
                auto it = flights_.find(ev.payload);
                if (it == flights_.end())
                    break;
                it->second.pkt.trace.push_back({ev.time, it->second.at, "arrive"});
                process(it->second, ev.time);
                break;
            }
            default:
                break;
        }
    }

    void refresh_sites() {
        sites_.clear();
        sites_.reserve(states_.size());
        for (const auto& s : states_)
            sites_.push_back(los_site(graph_, s.position, cfg_.radio));
    }

    Vec2 position_of(VehicleId id) const { return states_[index_of_.at(id)].position; }

    void originate(int pair, double time) {
        const PairSchedule& ps = pairs_[pair];
        PairMetrics& m = metrics_[static_cast<std::size_t>(pair)];
        const Vec2 src_pos = position_of(ps.source);
        const Vec2 dst_pos = position_of(ps.destination);
        if (m.sent == 0)
            m.distance_m = distance(src_pos, dst_pos);
        ++m.sent;

        InFlight f;
        f.pair = pair;
        f.at = ps.source;
        f.pkt.id = next_packet_id_++;
        f.pkt.source = ps.source;
        f.pkt.destination = ps.destination;
        f.pkt.dest_snapshot = dst_pos;
        f.pkt.size_bytes = cfg_.packet_size;
        f.pkt.protocol = protocol_;
        f.pkt.ttl = cfg_.ttl;
        f.pkt.trace.push_back({time, ps.source, "originate"});
        if (protocol_ == Protocol::kPbla) {
            try {
                pbla_originate(f.pkt, src_pos, graph_, *costs_, dst_pos);
            } catch (const std::exception&) {
                ++m.drops_nopath;
                return;
            }
        }
        const std::int64_t id = f.pkt.id;
        flights_.emplace(id, std::move(f));
        process(flights_.at(id), time);
    }

    std::vector<Neighbor> neighbor_view(VehicleId v, double now) const {
        std::vector<Neighbor> out;
        for (const auto& [id, e] :
             tables_[index_of_.at(v)].current(now, 3.0 * cfg_.beacon_period))
            out.push_back({id, e.position});
        return out;
    }

    ForwardingDecision decide(InFlight& f, const std::vector<Neighbor>& neighbors) {
        const VehicleId self = f.at;
        const Vec2 self_pos = position_of(self);
        switch (protocol_) {
            case Protocol::kGpsr:
                return gpsr_step(f.pkt, self, self_pos, neighbors, cfg_.radio);
            case Protocol::kGpcr:
                return gpcr_step(f.pkt, self, self_pos, neighbors, graph_, cfg_.radio);
            case Protocol::kPbla: {
                const auto refresh = [&] { return position_of(f.pkt.destination); };
                return pbla_step(f.pkt, self, self_pos, neighbors, graph_, refresh, cfg_.radio);
            }
        }
        return ForwardingDecision::drop(DropReason::kNoPath);
    }

    void process(InFlight& f, double now) {
        auto neighbors = neighbor_view(f.at, now);
        for (;;) {
            const ForwardingDecision d = decide(f, neighbors);
            switch (d.outcome) {
                case ForwardingDecision::Outcome::kDeliver:
                    finish_delivered(f, now);
                    return;
                case ForwardingDecision::Outcome::kDrop:
                    finish_dropped(f, now, d.reason);
                    return;
                case ForwardingDecision::Outcome::kBuffer:
                    if (!f.buffered) {
                        f.buffered = true;
                        f.buffered_since = now;
                        f.pkt.trace.push_back({now, f.at, "buffer"});
                    }
                    return;
                case ForwardingDecision::Outcome::kForward: {
                    const VehicleId u = d.next_hop;
                    const std::size_t iu = index_of_.at(u);
                    const std::size_t iv = index_of_.at(f.at);
                    // Stale table entries surface here: a transmission to a
                    // neighbor that is no longer reachable fails and the
                    // entry is evicted before deciding again.
                    if (!deliverable(states_[iv].position, sites_[iv], states_[iu].position,
                                     sites_[iu], graph_, cfg_.radio)) {
                        tables_[iv].erase(u);
                        std::erase_if(neighbors, [u](const Neighbor& n) { return n.id == u; });
                        continue;
                    }
                    f.buffered = false;
                    f.pkt.prev_hop = f.at;
                    f.pkt.prev_position = states_[iv].position;
                    f.pkt.has_prev = true;
                    ++f.pkt.hop_count;
                    f.pkt.trace.push_back({now, f.at, "forward"});
                    f.at = u;
                    queue_.schedule(now + hop_delay(f.pkt.size_bytes, cfg_.radio),
                                    EventKind::kPacketArrival, f.pkt.id);
                    return;
                }
            }
        }
    }

    void retry_buffered(double now) {
        std::vector<std::int64_t> ids;
        for (const auto& [id, f] : flights_)
            if (f.buffered)
                ids.push_back(id);
        std::sort(ids.begin(), ids.end());
        for (std::int64_t id : ids) {
            auto it = flights_.find(id);
            if (it == flights_.end() || !it->second.buffered)
                continue;
            InFlight& f = it->second;
            if (now - f.buffered_since > cfg_.t_retry) {
                finish_dropped(f, now, DropReason::kRetryTimeout);
                continue;
            }
            process(f, now);
        }
    }

    void finish_delivered(InFlight& f, double now) {
        f.pkt.trace.push_back({now, f.at, "deliver"});
        PairMetrics& m = metrics_[static_cast<std::size_t>(f.pair)];
        ++m.delivered;
        m.hop_counts.push_back(f.pkt.hop_count);
        flights_.erase(f.pkt.id);
    }

    void finish_dropped(InFlight& f, double now, DropReason reason) {
        f.pkt.trace.push_back({now, f.at, "drop " + drop_reason_name(reason)});
        PairMetrics& m = metrics_[static_cast<std::size_t>(f.pair)];
        switch (reason) {
            case DropReason::kTtlExceeded: ++m.drops_ttl; break;
            case DropReason::kRetryTimeout: ++m.drops_retry; break;
            case DropReason::kNoPath: ++m.drops_nopath; break;
        }
        flights_.erase(f.pkt.id);
    }

    const StreetGraph& graph_;
    const SimConfig& cfg_;
    Protocol protocol_;
    const CostMatrix* costs_;
    std::optional<TracePlayback> trace_;
    std::unique_ptr<Rng> mob_rng_;
    std::vector<VehicleState> states_;
    std::vector<LosSite> sites_;
    std::vector<NeighborTable> tables_;
    std::unordered_map<VehicleId, std::size_t> index_of_;
    std::vector<PairSchedule> pairs_;
    std::vector<PairMetrics> metrics_;
    EventQueue queue_;
    std::map<std::int64_t, InFlight> flights_;
    std::int64_t next_packet_id_ = 0;
};

}  // namespace

RunResult run_single(const StreetGraph& graph, const SimConfig& cfg, Protocol protocol,
                     const CostMatrix* costs) {
    Simulation sim(graph, cfg, protocol, costs);
    return sim.run();
}

}  // namespace vanetsim
