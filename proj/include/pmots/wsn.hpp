#pragma once

#include "pmots/problem.hpp"

#include <array>
#include <span>
#include <vector>

namespace pmots::wsn {

struct Node {
    double x = 0.0;
    double y = 0.0;
    double power_w = 1e-3;
    double energy_j = 1.0;  // spent per forwarded transmission
};

struct WsnTopology {
    std::vector<Node> nodes;
    std::vector<bool> communicating;
    std::vector<int> sources;
    std::vector<int> destinations;

    std::size_t size() const { return nodes.size(); }
    void validate() const;
};

struct TopologyParams {
    double density = 0.7;  // nodes per m²
    int count = 334;
    double radius = 5.0;   // communicating disk around the centre
    std::uint64_t seed = 1;
    double power_w = 1e-3;
    double energy_j = 1.0;
};

double disk_area(const TopologyParams& params);

/// Uniform points on a disk of area count/density centred at the origin.
/// The source is the communicating node with the smallest x, the
/// destination the one with the largest.
WsnTopology generate_topology(const TopologyParams& params);

struct LinkModel {
    double a0 = 1e-4;          // attenuation at d0
    double d0_m = 1.0;
    double alpha = 3.0;        // path-loss exponent
    double noise_w = 1e-12;
    double beta = 0.1;
    double packet_bits = 128.0;
    double gamma = 1.0 / 16.0; // chance an interferer's packet collides

    void validate() const;
};

double attenuation(const LinkModel& link, const Node& a, const Node& b);

/// Mean interference at receiver j for a transmission from i: every other
/// forwarder k (k ≠ i, k ≠ j) contributes P_k·a_kj·x_k·γ.
double expected_interference(const WsnTopology& topo, const LinkModel& link,
                             std::span<const double> x, int i, int j);

/// exp(-β·L/SINR). Returns 1 for an infinite SINR and 0 for a zero SINR.
double success_from_sinr(const LinkModel& link, double sinr);

double link_success(const WsnTopology& topo, const LinkModel& link, std::span<const double> x,
                    int i, int j);

/// reach[j][h-1] = P(packet from j reaches the destination in exactly h hops),
/// energy[j][h-1] = expected forwarding energy of that h-hop broadcast tree.
/// Only the source and the relays (x > 0, not the destination) are filled.
struct ReachTable {
    int h_max = 0;
    std::vector<std::vector<double>> reach;
    std::vector<std::vector<double>> energy;
};

ReachTable reach_table(const WsnTopology& topo, const LinkModel& link, std::span<const double> x,
                       int source, int destination, int h_max);

double robustness(std::span<const double> reach_from_source);
double delay(std::span<const double> reach_from_source);
double energy(std::span<const double> energy_from_source);

/// (f_R, f_D, f_E) for one source/destination pair.
using Triple = std::array<double, 3>;

Triple pair_criteria(const WsnTopology& topo, const LinkModel& link, std::span<const double> x,
                     int source, int destination, int h_max);

struct MonteCarloEstimate {
    Triple mean{};
    Triple stderr_{};
    std::uint64_t trials = 0;
};

/// Simulates the broadcast trees the reach table describes: for each hop
/// budget h an independent tree is grown where every relay is reached with
/// probability p_jr and forwards with probability x_r. Trials run in fixed
/// chunks, each on its own random stream, so the estimate does not depend on
/// the thread count.
MonteCarloEstimate monte_carlo_oracle(const WsnTopology& topo, const LinkModel& link,
                                      std::span<const double> x, int source, int destination,
                                      int h_max, std::uint64_t trials, std::uint64_t seed,
                                      int threads = 0);
MonteCarloEstimate monte_carlo_oracle_serial(const WsnTopology& topo, const LinkModel& link,
                                             std::span<const double> x, int source,
                                             int destination, int h_max, std::uint64_t trials,
                                             std::uint64_t seed);

inline constexpr std::uint64_t kMonteCarloChunk = 1024;

struct WsnInstance {
    WsnTopology topology;
    LinkModel link;
    std::vector<double> levels{0.0, 1.0};  // forwarding probabilities, 0 first and 1 last
    int h_max = 4;
    int max_forwarders = -1;               // -1: every eligible node
    int first_subset = 1;                  // forwarders in the first path's start solution
    int default_level = -1;                // -1: the top level
    bool two_objective = false;
    double reliability_tolerance = 1e-6;   // two-objective mode: feasible when f_R <= this

    void validate() const;
};

enum MoveKind : int { swap = 0, add = 1, remove = 2, level_change = 3 };

inline constexpr int kNodeState = 0;
inline constexpr int kAddSentinel = 1;
inline constexpr int kDeleteSentinel = 2;

/// Encoding: one level index per node; 0 means the node does not forward.
/// Sources and destinations always hold 0.
class WsnModel final : public EnumerableProblem {
public:
    explicit WsnModel(WsnInstance instance);

    const WsnInstance& instance() const { return inst_; }
    const std::vector<int>& eligible() const { return eligible_; }
    int forwarder_limit() const;
    int default_level() const;

    std::vector<double> probabilities(const Encoding& s) const;
    int forwarder_count(const Encoding& s) const;

    /// Criteria averaged over every source/destination pair.
    Triple criteria(const Encoding& s) const;

    std::string_view name() const override { return "wsn"; }
    std::vector<std::string> criterion_names() const override;
    std::vector<Encoding> initial_front(int count, Rng& rng) const override;
    std::vector<Neighbor> neighborhood(const Encoding& s) const override;
    std::optional<ObjectiveVector> evaluate(const Encoding& s) const override;
    TabuAttribute move_attribute(const Move& move, const Encoding& s) const override;
    std::vector<TabuAttribute> blocking_attributes(const Move& move,
                                                   const Encoding& s) const override;
    int subset_label(const Encoding& s) const override { return forwarder_count(s); }
    bool valid(const Encoding& s) const override;
    /// "node:level" for each forwarder, ';'-separated; empty when none forward.
    std::string format(const Encoding& s) const override;
    Encoding parse(std::string_view text) const override;

    BigInt enumeration_size() const override;
    void enumerate(const std::function<void(const Encoding&)>& visit) const override;

private:
    WsnInstance inst_;
    std::vector<int> eligible_;
};

}  // namespace pmots::wsn
