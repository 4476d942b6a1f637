#include "sos/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sos/error.hpp"

namespace sos {

const char* error_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::Ok: return "Ok";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::EnumerationTooLarge: return "EnumerationTooLarge";
        case ErrorCode::CapNotConverged: return "CapNotConverged";
        case ErrorCode::IncompatibleSet: return "IncompatibleSet";
        case ErrorCode::NegativeHeight: return "NegativeHeight";
        case ErrorCode::OrderTooLarge: return "OrderTooLarge";
        case ErrorCode::NonElementaryCylinder: return "NonElementaryCylinder";
        case ErrorCode::SiteNotAtZero: return "SiteNotAtZero";
        case ErrorCode::Disconnected: return "Disconnected";
        case ErrorCode::TemplateMismatch: return "TemplateMismatch";
        case ErrorCode::ParamsOutOfRange: return "ParamsOutOfRange";
        case ErrorCode::NotLargeSet: return "NotLargeSet";
        case ErrorCode::RegionTooLarge: return "RegionTooLarge";
        case ErrorCode::ParamsInvalid: return "ParamsInvalid";
        case ErrorCode::EpsilonRange: return "EpsilonRange";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::Internal: return "Internal";
    }
    return "Unknown";
}

ModelParams ModelParams::from_tu(double t, double u, double J) {
    if (!(t > 0.0 && t < 1.0) || !(J > 0.0) || !std::isfinite(u))
        throw Error(ErrorCode::ParamsInvalid, "need 0 < t < 1, J > 0, finite u");
    ModelParams p;
    p.t = t;
    p.u = u;
    p.J = J;
    return p;
}

ModelParams ModelParams::from_physical(double J, double K, double beta) {
    if (!(J > 0.0) || !(beta > 0.0) || !std::isfinite(K))
        throw Error(ErrorCode::ParamsInvalid, "need J > 0, beta > 0, finite K");
    ModelParams p;
    p.J = J;
    p.t = std::exp(-4.0 * beta * J);
    p.u = 2.0 * beta * (J - K);
    if (!(p.t > 0.0)) throw Error(ErrorCode::ParamsInvalid, "t underflows to zero");
    return p;
}

double ModelParams::beta() const { return -std::log(t) / (4.0 * J); }
double ModelParams::K() const { return J - u / (2.0 * beta()); }
double ModelParams::s() const { return t * std::exp(std::pow(t, 0.25)); }
double ModelParams::plaquette_cost() const { return -0.5 * std::log(t); }

HeightConfig::HeightConfig(const Box& b, std::vector<int> h) : box(b), heights(std::move(h)) {
    validate();
}

void HeightConfig::validate() const {
    if (box.width <= 0 || box.height <= 0 || box.boundary < 0)
        throw Error(ErrorCode::InvalidArgument, "box dimensions must be positive, boundary >= 0");
    if (heights.size() != box.size())
        throw Error(ErrorCode::InvalidArgument, "height array does not match box size");
    for (int v : heights)
        if (v < 0) throw Error(ErrorCode::NegativeHeight, "heights must be nonnegative");
}

namespace {

long gradient_sum(const HeightConfig& c) {
    const Box& b = c.box;
    long sum = 0;
    for (int y = 0; y < b.height; ++y) {
        for (int x = 0; x < b.width; ++x) {
            int h = c.heights[b.index(x, y)];
            sum += std::abs(h - c.at(x + 1, y));
            sum += std::abs(h - c.at(x, y + 1));
            if (x == 0) sum += std::abs(h - b.boundary);
            if (y == 0) sum += std::abs(h - b.boundary);
        }
    }
    return sum;
}

long wall_contacts(const HeightConfig& c) {
    return std::count(c.heights.begin(), c.heights.end(), 0);
}

// Streaming log-sum-exp with Neumaier compensation.
struct LogAccumulator {
    double shift = -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    double comp = 0.0;

    void rescale(double new_shift) {
        double f = std::exp(shift - new_shift);
        sum *= f;
        comp *= f;
        shift = new_shift;
    }
    void add(double log_w, double value = 1.0) {
        if (log_w > shift) rescale(log_w);
        double term = value * std::exp(log_w - shift);
        double s = sum + term;
        if (std::abs(sum) >= std::abs(term))
            comp += (sum - s) + term;
        else
            comp += (term - s) + sum;
        sum = s;
    }
    double total() const { return sum + comp; }
};

template <class Visit>
void enumerate_configs(const Box& box, int cap, Visit&& visit) {
    if (box.width <= 0 || box.height <= 0 || box.boundary < 0 || cap < 0)
        throw Error(ErrorCode::InvalidArgument, "invalid box or height cap");
    double count_log = static_cast<double>(box.size()) * std::log10(cap + 1.0);
    if (count_log > 9.0 + 1e-12)
        throw Error(ErrorCode::EnumerationTooLarge,
                    "(H_max+1)^|box| exceeds 1e9 configurations");
    HeightConfig c(box);
    std::fill(c.heights.begin(), c.heights.end(), 0);
    for (;;) {
        visit(c);
        std::size_t i = 0;
        while (i < c.heights.size() && c.heights[i] == cap) c.heights[i++] = 0;
        if (i == c.heights.size()) break;
        ++c.heights[i];
    }
}

struct Enumerated {
    double log_z = 0.0;
    std::vector<double> moments;
};

Enumerated enumerate_once(const Box& box, const ModelParams& params, int cap,
                          const VectorObservable* obs, std::size_t count) {
    LogAccumulator z;
    std::vector<LogAccumulator> acc(count);
    std::vector<double> buffer(count);
    double pc = params.plaquette_cost();
    enumerate_configs(box, cap, [&](const HeightConfig& c) {
        double log_w = -(pc * gradient_sum(c) - params.u * wall_contacts(c));
        z.add(log_w);
        if (obs) {
            (*obs)(c, buffer.data());
            for (std::size_t k = 0; k < count; ++k) acc[k].add(log_w, buffer[k]);
        }
    });
    Enumerated out;
    out.log_z = z.shift + std::log(z.total());
    out.moments.resize(count);
    for (std::size_t k = 0; k < count; ++k) {
        double scale = std::exp(acc[k].shift - z.shift);
        out.moments[k] = acc[k].total() * scale / z.total();
    }
    return out;
}

void check_settings(const Box& box, const ExactOracleSettings& s) {
    if (s.height_cap < box.boundary)
        throw Error(ErrorCode::InvalidArgument, "height cap must be at least the boundary level");
    if (!(s.cap_tolerance > 0.0))
        throw Error(ErrorCode::InvalidArgument, "cap tolerance must be positive");
}

void check_cap(const Box& box, const ModelParams& params, const ExactOracleSettings& s,
               double log_z) {
    // An infinite tolerance means the capped measure itself is the target.
    if (std::isinf(s.cap_tolerance)) return;
    Enumerated wider = enumerate_once(box, params, s.height_cap + 1, nullptr, 0);
    double delta = std::abs(wider.log_z - log_z);
    if (delta >= s.cap_tolerance)
        throw Error(ErrorCode::CapNotConverged,
                    "log Z moved by " + std::to_string(delta) + " when raising the cap");
}

}  // namespace

double energy(const HeightConfig& config, const ModelParams& params) {
    return params.plaquette_cost() * static_cast<double>(gradient_sum(config)) -
           params.u * static_cast<double>(wall_contacts(config));
}

double energy_cylinder_form(const HeightConfig& config, const ModelParams& params) {
    const Box& b = config.box;
    int top = b.boundary;
    for (int h : config.heights) top = std::max(top, h);
    auto filled = [&](int x, int y, int z) { return z < config.at(x, y); };
    // Vertical plaquettes: faces between a filled and an empty unit cube along bonds touching the box.
    long vertical = 0;
    for (int y = -1; y <= b.height; ++y) {
        for (int x = -1; x <= b.width; ++x) {
            for (int dir = 0; dir < 2; ++dir) {
                int nx = x + (dir == 0 ? 1 : 0);
                int ny = y + (dir == 1 ? 1 : 0);
                if (!b.contains(x, y) && !b.contains(nx, ny)) continue;
                for (int z = 0; z < top; ++z)
                    if (filled(x, y, z) != filled(nx, ny, z)) ++vertical;
            }
        }
    }
    long on_wall = 0;
    for (int y = 0; y < b.height; ++y)
        for (int x = 0; x < b.width; ++x)
            if (!filled(x, y, 0)) ++on_wall;
    return params.plaquette_cost() * static_cast<double>(vertical) -
           params.u * static_cast<double>(on_wall);
}

PartitionResult exact_partition(const Box& box, const ModelParams& params,
                                const ExactOracleSettings& settings) {
    check_settings(box, settings);
    Enumerated e = enumerate_once(box, params, settings.height_cap, nullptr, 0);
    check_cap(box, params, settings, e.log_z);
    return {std::exp(e.log_z), e.log_z};
}

std::vector<double> exact_expectations(const Box& box, const ModelParams& params,
                                       const ExactOracleSettings& settings,
                                       const VectorObservable& obs, std::size_t count) {
    check_settings(box, settings);
    Enumerated e = enumerate_once(box, params, settings.height_cap, &obs, count);
    check_cap(box, params, settings, e.log_z);
    return e.moments;
}

double exact_expectation(const Box& box, const ModelParams& params,
                         const ExactOracleSettings& settings, const Observable& obs) {
    VectorObservable wrap = [&](const HeightConfig& c, double* out) { out[0] = obs(c); };
    return exact_expectations(box, params, settings, wrap, 1)[0];
}

}  // namespace sos
