#pragma once

#include <vector>

#include "tcer/io.hpp"
#include "tcer/streaming.hpp"

namespace tcer {

struct BenchReport {
    std::size_t events = 0;
    std::size_t outputs = 0;
    std::size_t max_outputs_per_position = 0;
    std::vector<double> decile_update_ns;  // mean push() time per decile of the stream
    std::vector<double> decile_max_delay;  // max enumeration delay ratio per decile
    double update_growth = 0;              // last decile mean / first decile mean
    double delay_growth = 0;               // last / first over deciles that produced output
    double max_delay_ratio = 0;
    std::size_t max_union_list = 0;
    int max_odepth = 0;
    double seconds = 0;
};

// Streams s through the evaluator, timing every update. With enumerate set,
// every position is enumerated (outputs are counted, not stored).
BenchReport run_bench(const TimedCea& a, const TimedStream& s, bool enumerate = true);

Json bench_to_json(const BenchReport& r);

}  // namespace tcer
