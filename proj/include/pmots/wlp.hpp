#pragma once

#include "pmots/problem.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace pmots::wlp {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

struct Wall {
    Point a;
    Point b;
    double loss_db = 0.0;
};

/// Floor geometry. Coordinates are metres; blocks are laid out in pixels of
/// `meters_per_pixel` side.
struct Floorplan {
    double width_m = 0.0;
    double height_m = 0.0;
    double meters_per_pixel = 1.0;
    std::vector<Wall> walls;

    int width_px() const;
    int height_px() const;
};

/// Rectangular evaluation cell: pixel origin, pixel size, weight and centre.
struct Block {
    int x = 0;
    int y = 0;
    int sx = 1;
    int sy = 1;
    double weight = 1.0;
    Point center;
};

/// nx × ny blocks tiling the floor's pixel grid. Weights are pixel areas
/// scaled so that they sum to the block count.
std::vector<Block> make_block_grid(const Floorplan& floor, int nx, int ny);

enum class Orientation { maximize, minimize };

/// Piecewise-linear penalty. For `maximize`, 0 at or above s_max, delta at or
/// below s_min, linear between; `minimize` mirrors it.
struct PenaltyProfile {
    double s_min = 0.0;
    double s_max = 1.0;
    double delta = 1.0;
    Orientation orientation = Orientation::maximize;
};

double penalty(double utility, const PenaltyProfile& profile);

/// sqrt(Σ weight_l · penalty_l²).
double criterion(std::span<const double> penalties, std::span<const double> weights);

/// Log-distance path loss with straight-line wall losses and an optional
/// cosine-lobe antenna pattern.
struct RadioModel {
    double pl0_db = 40.0;        ///< loss at the reference distance
    double d0_m = 1.0;           ///< reference distance; closer blocks are clamped to it
    double exponent = 2.0;
    bool directional = false;
    double front_to_back_db = 20.0;
};

/// Antenna gain (dB) toward `bearing_deg` for a main lobe at `direction_deg`:
/// -FBR·(1 - cos θ)/2, or 0 for an omni antenna. Angles are counter-clockwise
/// from +x.
double gain_db(const RadioModel& radio, double direction_deg, double bearing_deg);

double path_loss_db(const RadioModel& radio, double distance_m);

/// Summed loss of walls crossed by the segment a-b.
double wall_loss_db(const Floorplan& floor, Point a, Point b);

struct RateTier {
    double snr_db = 0.0;
    double rate_bps = 0.0;
};

struct WlpInstance {
    std::vector<Point> sites;
    std::vector<double> powers_dbm;
    std::vector<double> directions_deg{0.0};
    std::vector<Block> blocks;
    PenaltyProfile coverage{-85.0, -70.0, 1.0, Orientation::maximize};
    PenaltyProfile interference{-90.0, -70.0, 1.0, Orientation::minimize};
    PenaltyProfile qos{0.0, 256e3, 1.0, Orientation::maximize};
    std::vector<RateTier> rate_tiers;
    double users = 1.0;
    double noise_floor_dbm = -100.0;
    RadioModel radio;
    int default_power = -1;   ///< -1: highest power
    int default_direction = 0;
    int max_active = -1;      ///< -1: no limit besides the site count
    int first_subset = 1;     ///< active sites in the first path's start solution

    std::size_t site_count() const { return sites.size(); }
    std::size_t power_count() const { return powers_dbm.size(); }
    std::size_t direction_count() const { return directions_deg.size(); }
    int active_limit() const;
    int default_setting() const;

    /// Throws std::invalid_argument naming the offending field.
    void validate() const;
};

/// Mean received power F[k][p][d][l] in dBm, block index innermost.
class CoverageTensor {
public:
    CoverageTensor() = default;
    CoverageTensor(std::size_t sites, std::size_t powers, std::size_t directions,
                   std::size_t blocks);

    double& at(std::size_t k, std::size_t p, std::size_t d, std::size_t l) {
        return data_[index(k, p, d) * blocks_ + l];
    }
    double at(std::size_t k, std::size_t p, std::size_t d, std::size_t l) const {
        return data_[index(k, p, d) * blocks_ + l];
    }
    /// Received power on every block for one (site, power, direction).
    std::span<const double> row(std::size_t k, std::size_t p, std::size_t d) const {
        return {data_.data() + index(k, p, d) * blocks_, blocks_};
    }

    std::size_t sites() const { return sites_; }
    std::size_t powers() const { return powers_; }
    std::size_t directions() const { return directions_; }
    std::size_t blocks() const { return blocks_; }
    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    bool operator==(const CoverageTensor&) const = default;

private:
    std::size_t index(std::size_t k, std::size_t p, std::size_t d) const {
        return (k * powers_ + p) * directions_ + d;
    }

    std::size_t sites_ = 0;
    std::size_t powers_ = 0;
    std::size_t directions_ = 0;
    std::size_t blocks_ = 0;
    std::vector<double> data_;
};

/// Received power at `target` from site k at power p, direction d.
double received_power_dbm(const WlpInstance& inst, const Floorplan& floor, std::size_t k,
                          std::size_t p, std::size_t d, Point target);

/// Parallel over (site, block) pairs.
CoverageTensor generate_coverage_tensor(const WlpInstance& inst, const Floorplan& floor,
                                        int threads = 0);
CoverageTensor generate_coverage_tensor_serial(const WlpInstance& inst, const Floorplan& floor);

/// Content hash of everything the tensor depends on.
std::string tensor_cache_key(const WlpInstance& inst, const Floorplan& floor);

/// Reads `<dir>/wlp-tensor-<key>.bin` when present, otherwise generates and
/// writes it.
CoverageTensor load_or_generate_tensor(const WlpInstance& inst, const Floorplan& floor,
                                       const std::filesystem::path& dir, int threads = 0);

void write_tensor(const CoverageTensor& tensor, const std::filesystem::path& file);
CoverageTensor read_tensor(const std::filesystem::path& file);

enum MoveKind : int { swap = 0, add = 1, remove = 2, power_change = 3, direction_change = 4 };

/// Tabu attribute kinds: an AP state, and the add/delete sentinels.
inline constexpr int kApState = 0;
inline constexpr int kAddSentinel = 1;
inline constexpr int kDeleteSentinel = 2;

/// Encoding: one entry per site, -1 when off, otherwise power·N_D + direction.
inline constexpr int kOff = -1;

/// Access-point planning problem with criteria (f_cov, f_i, f_QoS).
class WlpModel final : public EnumerableProblem {
public:
    WlpModel(WlpInstance instance, CoverageTensor tensor);

    const WlpInstance& instance() const { return inst_; }
    const CoverageTensor& tensor() const { return tensor_; }

    int setting(int power, int direction) const;
    int power_of(int setting) const;
    int direction_of(int setting) const;
    int active_count(const Encoding& s) const;

    double received(const Encoding& s, std::size_t site, std::size_t block) const;
    double utility_coverage(const Encoding& s, std::size_t block) const;
    double utility_interference(const Encoding& s, std::size_t block) const;
    double utility_qos(const Encoding& s, std::size_t block) const;
    /// Throughput on every block (bit/s).
    std::vector<double> qos_utilities(const Encoding& s) const;
    double nominal_rate(double snr_db) const;

    ObjectiveVector criteria(const Encoding& s) const;

    std::string_view name() const override { return "wlp"; }
    std::vector<std::string> criterion_names() const override { return {"f_cov", "f_i", "f_qos"}; }
    std::vector<Encoding> initial_front(int count, Rng& rng) const override;
    std::vector<Neighbor> neighborhood(const Encoding& s) const override;
    std::optional<ObjectiveVector> evaluate(const Encoding& s) const override { return criteria(s); }
    TabuAttribute move_attribute(const Move& move, const Encoding& s) const override;
    std::vector<TabuAttribute> blocking_attributes(const Move& move,
                                                   const Encoding& s) const override;
    int subset_label(const Encoding& s) const override { return active_count(s); }
    bool valid(const Encoding& s) const override;
    std::string format(const Encoding& s) const override;
    Encoding parse(std::string_view text) const override;

    BigInt enumeration_size() const override;
    void enumerate(const std::function<void(const Encoding&)>& visit) const override;

private:
    struct ActiveRow {
        int site;
        std::span<const double> received;  // per block
    };
    /// Tensor rows of the active sites, in site order.
    std::vector<ActiveRow> active_rows(const Encoding& s) const;

    WlpInstance inst_;
    CoverageTensor tensor_;
    std::vector<double> weights_;
    int settings_;
};

}  // namespace pmots::wlp
