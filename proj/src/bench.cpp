#include "tcer/bench.hpp"

#include <chrono>

namespace tcer {

BenchReport run_bench(const TimedCea& a, const TimedStream& s, bool enumerate) {
    using Clock = std::chrono::steady_clock;
    BenchReport r;
    r.events = s.size();
    StreamingEvaluator ev(a);
    std::vector<double> update_ns(s.size());
    std::vector<double> delay(s.size(), 0.0);
    std::vector<bool> produced(s.size(), false);
    auto start = Clock::now();
    for (std::size_t j = 1; j <= s.size(); ++j) {
        auto t0 = Clock::now();
        ev.push(s.event(j), s.ts(j));
        update_ns[j - 1] = std::chrono::duration<double, std::nano>(Clock::now() - t0).count();
        if (!enumerate) continue;
        std::size_t n = 0;
        ev.enumerate([&](const ComplexEvent&) { ++n; });
        r.outputs += n;
        r.max_outputs_per_position = std::max(r.max_outputs_per_position, n);
        delay[j - 1] = ev.last_enumeration().max_delay_ratio;
        produced[j - 1] = n > 0;
    }
    r.seconds = std::chrono::duration<double>(Clock::now() - start).count();

    std::vector<double> decile_delay;
    for (int d = 0; d < 10; ++d) {
        std::size_t lo = s.size() * d / 10, hi = s.size() * (d + 1) / 10;
        double sum = 0, mx = 0;
        bool any = false;
        for (std::size_t k = lo; k < hi; ++k) {
            sum += update_ns[k];
            mx = std::max(mx, delay[k]);
            any = any || produced[k];
        }
        r.decile_update_ns.push_back(hi > lo ? sum / static_cast<double>(hi - lo) : 0.0);
        r.decile_max_delay.push_back(mx);
        if (any) decile_delay.push_back(mx);
    }
    if (r.decile_update_ns.front() > 0) r.update_growth = r.decile_update_ns.back() / r.decile_update_ns.front();
    if (decile_delay.size() >= 2 && decile_delay.front() > 0)
        r.delay_growth = decile_delay.back() / decile_delay.front();
    r.max_delay_ratio = ev.stats().max_delay_ratio;
    r.max_union_list = ev.stats().max_union_list;
    r.max_odepth = ev.stats().max_odepth;
    return r;
}

Json bench_to_json(const BenchReport& r) {
    return {{"events", r.events},
            {"outputs", r.outputs},
            {"max_outputs_per_position", r.max_outputs_per_position},
            {"decile_mean_update_ns", r.decile_update_ns},
            {"update_growth", r.update_growth},
            {"decile_max_delay_ratio", r.decile_max_delay},
            {"max_delay_ratio", r.max_delay_ratio},
            {"delay_growth", r.delay_growth},
            {"max_union_list", r.max_union_list},
            {"max_odepth", r.max_odepth},
            {"seconds", r.seconds}};
}

}  // namespace tcer
