#include "elmpc/idt/baseline.hpp"

#include <cmath>
#include <string>

#include "elmpc/error.hpp"
#include "elmpc/info/serialization.hpp"

namespace elmpc::idt {

using nlohmann::json;

double Baseline::band_std(const MetricStats& s) const {
    return std::max(s.std, std_floor);
}

bool operator==(const Baseline& a, const Baseline& b) {
    const bool schemes_equal =
        a.schemes.has_value() == b.schemes.has_value() &&
        (!a.schemes || (a.schemes->state == b.schemes->state && a.schemes->action == b.schemes->action));
    return a.psi == b.psi && a.asymmetry == b.asymmetry && a.memory == b.memory && a.k == b.k &&
           a.std_floor == b.std_floor && a.psi_threshold == b.psi_threshold &&
           a.memory_threshold == b.memory_threshold && a.asymmetry_low == b.asymmetry_low &&
           a.asymmetry_high == b.asymmetry_high && a.span_begin == b.span_begin &&
           a.span_end == b.span_end && a.samples == b.samples && schemes_equal;
}

namespace {

template <typename Get>
MetricStats population_stats(std::span<const info::EntanglementMetrics> stream, Get get) {
    double mean = 0.0;
    for (const auto& m : stream) mean += get(m);
    mean /= static_cast<double>(stream.size());
    double var = 0.0;
    for (const auto& m : stream) {
        const double d = get(m) - mean;
        var += d * d;
    }
    var /= static_cast<double>(stream.size());
    return MetricStats{mean, std::sqrt(var)};
}

}  // namespace

Baseline calibrate(std::span<const info::EntanglementMetrics> stream, const IdtConfig& cfg,
                   std::int64_t span_begin, std::int64_t span_end) {
    const std::size_t needed = std::max(cfg.calibration_length, cfg.min_samples);
    if (stream.size() < needed) {
        throw CalibrationError("calibration needs " + std::to_string(needed) +
                               " metric samples, got " + std::to_string(stream.size()));
    }
    Baseline b;
    b.psi = population_stats(stream, [](const auto& m) { return m.psi; });
    b.asymmetry = population_stats(stream, [](const auto& m) { return m.asymmetry; });
    b.memory = population_stats(stream, [](const auto& m) { return m.memory; });
    b.k = cfg.k;
    b.std_floor = cfg.std_floor;
    b.psi_threshold = b.psi.mean - b.k * b.band_std(b.psi);
    b.memory_threshold = b.memory.mean - b.k * b.band_std(b.memory);
    b.asymmetry_low = b.asymmetry.mean - b.k * b.band_std(b.asymmetry);
    b.asymmetry_high = b.asymmetry.mean + b.k * b.band_std(b.asymmetry);
    b.span_begin = span_begin;
    b.span_end = span_end;
    b.samples = stream.size();
    return b;
}

json baseline_to_json(const Baseline& b) {
    auto stats = [](const MetricStats& s) { return json{{"mean", s.mean}, {"std", s.std}}; };
    json j{
        {"psi", stats(b.psi)},
        {"asymmetry", stats(b.asymmetry)},
        {"memory", stats(b.memory)},
        {"k", b.k},
        {"std_floor", b.std_floor},
        {"thresholds",
         {{"psi", b.psi_threshold},
          {"memory", b.memory_threshold},
          {"asymmetry_low", b.asymmetry_low},
          {"asymmetry_high", b.asymmetry_high}}},
        {"calibration", {{"begin", b.span_begin}, {"end", b.span_end}, {"samples", b.samples}}},
    };
    if (b.schemes) {
        j["scheme"] = {{"state", info::scheme_to_json(b.schemes->state)},
                       {"action", info::scheme_to_json(b.schemes->action)}};
    }
    return j;
}

Baseline baseline_from_json(const json& j) {
    try {
        auto stats = [](const json& s) {
            return MetricStats{s.at("mean").get<double>(), s.at("std").get<double>()};
        };
        Baseline b;
        b.psi = stats(j.at("psi"));
        b.asymmetry = stats(j.at("asymmetry"));
        b.memory = stats(j.at("memory"));
        b.k = j.at("k").get<double>();
        b.std_floor = j.value("std_floor", 0.0);
        const auto& t = j.at("thresholds");
        b.psi_threshold = t.at("psi").get<double>();
        b.memory_threshold = t.at("memory").get<double>();
        b.asymmetry_low = t.at("asymmetry_low").get<double>();
        b.asymmetry_high = t.at("asymmetry_high").get<double>();
        const auto& c = j.at("calibration");
        b.span_begin = c.at("begin").get<std::int64_t>();
        b.span_end = c.at("end").get<std::int64_t>();
        b.samples = c.at("samples").get<std::size_t>();
        if (j.contains("scheme")) {
            b.schemes = FeatureSchemes{info::scheme_from_json(j["scheme"].at("state")),
                                       info::scheme_from_json(j["scheme"].at("action"))};
        }
        for (double v : {b.psi.std, b.asymmetry.std, b.memory.std}) {
            if (!(v >= 0.0)) throw ConfigError("baseline std must be >= 0");
        }
        for (double v : {b.psi_threshold, b.memory_threshold, b.asymmetry_low, b.asymmetry_high}) {
            if (!std::isfinite(v)) throw ConfigError("baseline thresholds must be finite");
        }
        return b;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad baseline document: ") + e.what());
    }
}

}  // namespace elmpc::idt
