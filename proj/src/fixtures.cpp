#include "tcer/fixtures.hpp"

namespace tcer {

TimedStream sensor_example_stream() {
    struct Row {
        const char* type;
        int value;
        Rational ts;
    };
    const Row rows[] = {{"H", 25, Rational(12, 10)}, {"T", 45, Rational(133, 100)}, {"H", 20, Rational(25, 10)},
                        {"H", 25, Rational(37, 10)}, {"T", 40, Rational(45, 10)},   {"T", 42, Rational(53, 10)},
                        {"T", 25, Rational(59, 10)}, {"H", 70, Rational(61, 10)},   {"H", 18, Rational(72, 10)}};
    TimedStream s;
    for (const auto& r : rows) {
        Event e;
        e.type = r.type;
        e.attrs[e.type == "H" ? "hum" : "temp"] = Rational(r.value);
        s.push(std::move(e), r.ts);
    }
    return s;
}

namespace {

Transition make(State from, State to, Predicate p, Guard g = Guard::always(), VarSet l = {}, ClockSet z = {}) {
    Transition t;
    t.from = from;
    t.to = to;
    t.pred = std::move(p);
    t.guard = std::move(g);
    t.label = std::move(l);
    t.resets = std::move(z);
    return t;
}

}  // namespace

TimedCea temp_hum_one_clock(Cmp temp_cmp) {
    TimedCea a;
    for (int q = 0; q < 4; ++q) a.add_state();
    a.finals = {3};
    Predicate hot = Predicate::basic("temp", temp_cmp, Rational(40));
    Predicate dry = Predicate::basic("hum", Cmp::Lt, Rational(25));
    a.add(make(0, 1, hot, Guard::always(), {"X"}, {"z"}));
    a.add(make(1, 1, Predicate::always()));
    a.add(make(1, 2, hot, Guard::atom("z", Cmp::Le, Rational(1))));
    a.add(make(2, 2, Predicate::always()));
    a.add(make(2, 3, dry, Guard::atom("z", Cmp::Le, Rational(5)), {"Y"}));
    return a;
}

TimedCea temp_hum_two_clocks(Cmp temp_cmp) {
    TimedCea a;
    for (int q = 0; q < 5; ++q) a.add_state();
    a.finals = {4};
    Predicate hot = Predicate::basic("temp", temp_cmp, Rational(40));
    Predicate dry = Predicate::basic("hum", Cmp::Lt, Rational(25));
    a.add(make(0, 1, hot, Guard::always(), {"X"}, {"z1"}));
    a.add(make(1, 1, Predicate::always()));
    a.add(make(1, 2, hot, Guard::always(), {"X"}, {"z2"}));
    a.add(make(2, 2, Predicate::always()));
    a.add(make(2, 3, dry, Guard::atom("z1", Cmp::Le, Rational(5)), {"Y"}));
    a.add(make(3, 3, Predicate::always()));
    a.add(make(3, 4, dry, Guard::atom("z2", Cmp::Le, Rational(5)), {"Y"}));
    return a;
}

}  // namespace tcer
