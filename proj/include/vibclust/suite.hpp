#ifndef VIBCLUST_SUITE_HPP
#define VIBCLUST_SUITE_HPP

#include <vector>

#include "vibclust/dataio.hpp"

namespace vibclust {

// Synthetic stand-ins shaped after the three benchmark recordings: a six-condition pump test
// bench (3 axes, 6644 Hz), a five-level unbalance rig (3 sensors, 4096 Hz) and a three-condition
// water circulation pump (2 sensors, 1 Hz). Class profiles overlap on purpose so that no
// single feature separates every condition.

inline SyntheticSpec pump_bench_spec() {
    SyntheticSpec s;
    s.name = "synth-pump";
    s.num_classes = 6;
    s.windows_per_class = 40;
    s.window_length = 512;
    s.num_channels = 3;
    s.sample_rate = 6644.0;
    s.class_profiles = {
        {0.3, 12, 0.15},  // idle
        {1.0, 20, 0.30},  // healthy, partial load
        {1.2, 20, 0.30},  // healthy
        {1.6, 24, 0.40},  // hydraulic blockade
        {0.8, 30, 0.50},  // dry run
        {1.0, 40, 0.90},  // cavitation
    };
    s.seed = 1;
    return s;
}

inline SyntheticSpec unbalance_rig_spec() {
    SyntheticSpec s;
    s.name = "synth-unbalance";
    s.num_classes = 5;
    s.windows_per_class = 40;
    s.window_length = 512;
    s.num_channels = 3;
    s.sample_rate = 4096.0;
    s.class_profiles = {
        {0.5, 8, 0.4}, {0.7, 8, 0.4}, {0.9, 8, 0.4}, {1.1, 8, 0.4}, {1.3, 8, 0.4},
    };
    s.seed = 2;
    return s;
}

inline SyntheticSpec circulation_pump_spec() {
    SyntheticSpec s;
    s.name = "synth-circulation";
    s.num_classes = 3;
    s.windows_per_class = 40;
    s.window_length = 512;
    s.num_channels = 2;
    s.sample_rate = 1.0;
    s.class_profiles = {
        {1.0, 6, 0.5},  // healthy
        {0.6, 6, 0.6},  // dry run
        {1.3, 9, 0.5},  // hydraulic blockade
    };
    s.seed = 3;
    return s;
}

inline std::vector<SyntheticSpec> default_synthetic_suite() {
    return {pump_bench_spec(), unbalance_rig_spec(), circulation_pump_spec()};
}

/// Three classes that differ only in amplitude (1, 2, 4) under the same additive noise.
inline SyntheticSpec amplitude_ladder_spec() {
    SyntheticSpec s;
    s.name = "amplitude-ladder";
    s.num_classes = 3;
    s.windows_per_class = 30;
    s.window_length = 512;
    s.num_channels = 1;
    s.sample_rate = 1.0;
    s.class_profiles = {{1.0, 8, 0.1}, {2.0, 8, 0.1}, {4.0, 8, 0.1}};
    s.seed = 7;
    return s;
}

}  // namespace vibclust

#endif  // VIBCLUST_SUITE_HPP
