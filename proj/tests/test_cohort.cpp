#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "courseval/cohort.hpp"
#include "courseval/rng.hpp"
#include "oracles.hpp"

using namespace courseval;

namespace {

Date d(int y, unsigned m, unsigned day) { return Date::from_ymd(y, m, day); }

/// Curve starting at `origin`, employed for the first `employed_prefix` days
/// of a `len`-day observation window.
WorkingLifeCurve prefix_curve(const std::string& id, Date origin, std::int32_t len,
                              std::int32_t employed_prefix) {
    std::vector<ResolvedContract> cs;
    if (employed_prefix > 0)
        cs.push_back({origin, origin.plus_days(employed_prefix - 1),
                      ContractTypology::temporary, ProfessionalFamily::ADM, false});
    return build_curve(id, origin, cs, origin.plus_days(len - 1));
}

struct People {
    // Curves owned here; views hold stable pointers into this storage.
    std::vector<std::unique_ptr<WorkingLifeCurve>> curves;
    std::vector<PersonView> views;

    void add(const std::string& id, Date origin, std::int32_t len,
             std::int32_t employed_prefix, Gender g, Date birth,
             EducationLevel level_at_origin = EducationLevel::compulsory) {
        curves.push_back(std::make_unique<WorkingLifeCurve>(
            prefix_curve(id, origin, len, employed_prefix)));
        PersonView v;
        v.id = id;
        v.curve = curves.back().get();
        v.gender = g;
        v.birth = birth;
        if (level_at_origin != EducationLevel::none)
            v.education_steps.emplace_back(origin.plus_days(-1), level_at_origin);
        views.push_back(std::move(v));
    }

    /// Everyone except views[0], which tests use as the subject.
    std::vector<PersonView> pool() const {
        return {views.begin() + 1, views.end()};
    }
};

kernels::DistanceMatrix matrix_from_points(const std::vector<std::pair<double, double>>& pts) {
    kernels::DistanceMatrix m(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            const double dx = pts[i].first - pts[j].first;
            const double dy = pts[i].second - pts[j].second;
            m.set(i, j, std::sqrt(dx * dx + dy * dy));
        }
    return m;
}

} // namespace

TEST_CASE("age in whole years respects the birthday") {
    PersonView v;
    v.birth = d(1980, 6, 15);
    CHECK(v.age_years_at(d(2000, 6, 14)) == 19);
    CHECK(v.age_years_at(d(2000, 6, 15)) == 20);
    CHECK(v.age_years_at(d(2000, 6, 16)) == 20);

    PersonView leap;
    leap.birth = d(1980, 2, 29);
    CHECK(leap.age_years_at(d(1981, 2, 28)) == 0);
    CHECK(leap.age_years_at(d(1981, 3, 1)) == 1);
}

TEST_CASE("education steps accumulate to the running maximum") {
    const std::vector<StudyRecord> studies = {
        {"P", StudyType::vocational, "x", d(2000, 6, 30)},
        {"P", StudyType::compulsory, "x", d(1996, 6, 30)},
        {"P", StudyType::training_course, "x", d(2005, 1, 1)}, // never counts
        {"P", StudyType::compulsory, "x", d(2008, 6, 30)},     // below running max
    };
    const auto steps = education_steps_from(studies);
    REQUIRE(steps.size() == 2);
    CHECK(steps[0] == std::pair(d(1996, 6, 30), EducationLevel::compulsory));
    CHECK(steps[1] == std::pair(d(2000, 6, 30), EducationLevel::vocational));

    PersonView v;
    v.education_steps = steps;
    CHECK(v.education_at(d(1990, 1, 1)) == EducationLevel::none);
    CHECK(v.education_at(d(1996, 6, 30)) == EducationLevel::compulsory);
    CHECK(v.education_at(d(2001, 1, 1)) == EducationLevel::vocational);
}

TEST_CASE("pam clusters an obvious two-group layout") {
    // Two tight groups on a line: {0, 1, 2} near zero and {10, 11, 12}.
    const auto m = matrix_from_points(
        {{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}, {10.0, 0.0}, {11.0, 0.0}, {12.0, 0.0}});
    const auto r = pam_cluster(m, 2);
    CHECK(r.medoids == std::vector<std::uint32_t>{1, 4});
    CHECK(r.medoid_of[0] == 1);
    CHECK(r.medoid_of[2] == 1);
    CHECK(r.medoid_of[3] == 4);
    CHECK(r.medoid_of[5] == 4);
    CHECK(r.total_cost == doctest::Approx(4.0));
    for (std::size_t i = 1; i < r.cost_history.size(); ++i)
        CHECK(r.cost_history[i] <= r.cost_history[i - 1] + 1e-12);
}

TEST_CASE("pam edge cases") {
    const auto m = matrix_from_points({{0, 0}, {5, 0}, {9, 0}});
    // k = n: every point its own medoid, zero cost.
    const auto all = pam_cluster(m, 3);
    CHECK(all.medoids == std::vector<std::uint32_t>{0, 1, 2});
    CHECK(all.total_cost == 0.0);
    // k = 1: the most central point (index 1) serves everyone.
    const auto one = pam_cluster(m, 1);
    CHECK(one.medoids == std::vector<std::uint32_t>{1});
    CHECK(one.total_cost == doctest::Approx(9.0));
    // A point equidistant to both medoids assigns to the smaller index.
    const auto tie = matrix_from_points({{0, 0}, {2, 0}, {1, 0}});
    const auto t = pam_cluster(tie, 2);
    if (t.medoids == std::vector<std::uint32_t>{0, 1})
        CHECK(t.medoid_of[2] == 0);

    CHECK_THROWS(static_cast<void>(pam_cluster(m, 0)));
    CHECK_THROWS(static_cast<void>(pam_cluster(m, 4)));
}

TEST_CASE("pam reaches the exhaustive optimum on small instances") {
    Rng rng(31);
    int optimal = 0;
    const int instances = 50;
    for (int rep = 0; rep < instances; ++rep) {
        const std::size_t n = 4 + rng.below(5); // 4..8
        std::vector<std::pair<double, double>> pts;
        for (std::size_t i = 0; i < n; ++i)
            pts.emplace_back(rng.uniform(0.0, 10.0), rng.uniform(0.0, 10.0));
        const auto m = matrix_from_points(pts);
        const int k = 1 + static_cast<int>(rng.below(n - 1));
        const auto got = pam_cluster(m, k);
        const double want = oracles::brute_force_medoid_cost(m, k);
        CHECK(got.total_cost >= want - 1e-9); // never below the true optimum
        if (got.total_cost <= want + 1e-9)
            ++optimal;
    }
    // Local search may miss occasionally; on these sizes it almost never does.
    CHECK(optimal >= instances - 2);
}

TEST_CASE("gap statistic finds three planted groups") {
    const std::vector<std::pair<double, double>> centers = {{0, 0}, {10, 0}, {0, 10}};
    for (const std::uint64_t seed : {0ull, 1ull, 2ull, 3ull, 4ull}) {
        Rng rng(seed);
        kernels::PointSet points;
        points.n = 60;
        points.dim = 2;
        for (std::size_t i = 0; i < points.n; ++i) {
            const auto& c = centers[i % 3];
            points.values.push_back(c.first + rng.uniform(-0.5, 0.5));
            points.values.push_back(c.second + rng.uniform(-0.5, 0.5));
        }
        CHECK(gap_optimal_k(points, 8, 30, rng.child(99)) == 3);
    }
}

TEST_CASE("gap statistic degenerate inputs") {
    kernels::PointSet one;
    one.n = 1;
    one.dim = 2;
    one.values = {1.0, 2.0};
    CHECK(gap_optimal_k(one, 10, 10, Rng(0)) == 1);

    kernels::PointSet same;
    same.n = 5;
    same.dim = 2;
    for (int i = 0; i < 5; ++i) {
        same.values.push_back(3.0);
        same.values.push_back(4.0);
    }
    CHECK(gap_optimal_k(same, 10, 10, Rng(0)) == 1);

    // The scan never proposes k beyond n - 1.
    kernels::PointSet pair;
    pair.n = 2;
    pair.dim = 1;
    pair.values = {0.0, 100.0};
    CHECK(gap_optimal_k(pair, 10, 10, Rng(0)) == 1);
}

TEST_CASE("matching filter evaluates candidates on their own clocks") {
    const Date origin = d(2005, 1, 1);
    People people;
    // Subject: day 100 of her curve is 2005-04-10, where she is 24.
    people.add("S", origin, 200, 100, Gender::female, d(1980, 6, 1));
    const std::int32_t t_i = 100;
    CohortConfig config;
    config.horizon_days = 50; // candidates need curves of at least 150 days

    people.add("ok", origin, 150, 80, Gender::female, d(1982, 1, 1));
    people.add("wrong-gender", origin, 200, 80, Gender::male, d(1982, 1, 1));
    people.add("too-short", origin, 149, 80, Gender::female, d(1982, 1, 1));
    people.add("too-old", origin, 200, 80, Gender::female, d(1973, 1, 1));
    people.add("too-young", origin, 200, 80, Gender::female, d(1987, 1, 1));
    people.add("wrong-education", origin, 200, 80, Gender::female, d(1982, 1, 1),
               EducationLevel::university);
    // Curve shifted eight years: at her own day 100 (2013-04-10) she is 24,
    // exactly the subject's own-clock age, although on the subject's calendar
    // date she would only be 16 and fail the window. Same story for the
    // education step, which sits just before her 2013 origin.
    people.add("shifted-same-own-age", d(2013, 1, 1), 200, 80, Gender::female,
               d(1988, 6, 2));
    people.add("S", origin, 200, 100, Gender::female, d(1980, 6, 1)); // subject's id

    const PersonView& subject = people.views[0];
    const auto pool = people.pool();
    CHECK(initial_control_group(subject, t_i, pool, config) ==
          std::vector<std::uint32_t>{0, 6});

    // Widening the age window admits the age-based rejects as well.
    config.age_window_years = 100;
    CHECK(initial_control_group(subject, t_i, pool, config) ==
          std::vector<std::uint32_t>{0, 3, 4, 6});
}

TEST_CASE("cap_to_nearest orders by distance then id") {
    const Date origin = d(2005, 1, 1);
    People people;
    people.add("S", origin, 200, 100, Gender::female, d(1980, 6, 1));
    // Twins repeat the subject's employment prefix, so their distance is 0
    // and only the id ordering separates them.
    people.add("b-twin", origin, 200, 100, Gender::female, d(1980, 6, 1));
    people.add("a-twin", origin, 200, 100, Gender::female, d(1980, 6, 1));
    people.add("far", origin, 200, 10, Gender::female, d(1980, 6, 1));
    people.add("near", origin, 200, 90, Gender::female, d(1980, 6, 1));

    const PersonView& subject = people.views[0];
    const auto pool = people.pool();
    CohortConfig config;
    config.horizon_days = 50;
    const std::vector<std::uint32_t> candidates = {0, 1, 2, 3};

    const auto capped = cap_to_nearest(subject, 100, pool, candidates, config);
    REQUIRE(capped.members.size() == 4);
    CHECK(pool[capped.members[0]].id == "a-twin");
    CHECK(pool[capped.members[1]].id == "b-twin");
    CHECK(pool[capped.members[2]].id == "near");
    CHECK(pool[capped.members[3]].id == "far");
    CHECK(capped.distances[0] == 0.0);
    CHECK(capped.distances[1] == 0.0);
    CHECK(capped.distances[2] < capped.distances[3]);

    config.nn_cap = 2;
    const auto cut = cap_to_nearest(subject, 100, pool, candidates, config);
    REQUIRE(cut.members.size() == 2);
    CHECK(pool[cut.members[0]].id == "a-twin");
    CHECK(pool[cut.members[1]].id == "b-twin");

    // Serial and parallel produce identical results.
    config.nn_cap = 500;
    const auto serial =
        cap_to_nearest(subject, 100, pool, candidates, config, ExecPolicy::serial);
    CHECK(serial.members == capped.members);
    CHECK(serial.distances == capped.distances);
}

TEST_CASE("control group keeps the subject's cluster") {
    const Date origin = d(2005, 1, 1);
    People people;
    people.add("S", origin, 300, 100, Gender::female, d(1980, 6, 1));
    // Group A hugs the subject's pattern, group B is distant.
    people.add("a1", origin, 300, 98, Gender::female, d(1980, 6, 1));
    people.add("a2", origin, 300, 102, Gender::female, d(1980, 6, 1));
    people.add("a3", origin, 300, 104, Gender::female, d(1980, 6, 1));
    people.add("b1", origin, 300, 5, Gender::female, d(1980, 6, 1));
    people.add("b2", origin, 300, 8, Gender::female, d(1980, 6, 1));
    people.add("b3", origin, 300, 12, Gender::female, d(1980, 6, 1));

    const PersonView& subject = people.views[0];
    const auto pool = people.pool();
    CohortConfig config;
    config.horizon_days = 50;

    const auto group = build_control_group(subject, 200, pool, 2, config);
    REQUIRE(group);
    CHECK_FALSE(group->fallback);
    CHECK(group->k_used == 2);
    std::vector<std::string> ids;
    for (const auto p : group->members)
        ids.push_back(pool[p].id);
    std::sort(ids.begin(), ids.end());
    CHECK(ids == std::vector<std::string>{"a1", "a2", "a3"});
    CHECK(group->distances.size() == group->members.size());

    // Serial and parallel agree exactly.
    const auto serial =
        build_control_group(subject, 200, pool, 2, config, ExecPolicy::serial);
    REQUIRE(serial);
    CHECK(serial->members == group->members);
    CHECK(serial->distances == group->distances);
}

TEST_CASE("isolated subject falls back to nearest neighbours") {
    const Date origin = d(2005, 1, 1);
    People people;
    people.add("S", origin, 300, 200, Gender::female, d(1980, 6, 1));
    // Six identical never-employed candidates: the subject clusters alone.
    for (int i = 0; i < 6; ++i)
        people.add("idle" + std::to_string(i), origin, 300, 0, Gender::female,
                   d(1980, 6, 1));

    const PersonView& subject = people.views[0];
    const auto pool = people.pool();
    CohortConfig config;
    config.horizon_days = 50;

    const auto group = build_control_group(subject, 200, pool, 2, config);
    REQUIRE(group);
    CHECK(group->fallback);
    CHECK(group->members.size() == 6);

    // An empty filter result (no same-gender candidates) yields no group.
    People lone;
    lone.add("S", origin, 300, 200, Gender::male, d(1980, 6, 1));
    const auto none = build_control_group(lone.views[0], 200, pool, 2, config);
    CHECK_FALSE(none);
}

TEST_CASE("course cluster count override and emptiness") {
    const Date origin = d(2005, 1, 1);
    People people;
    people.add("S1", origin, 300, 100, Gender::female, d(1980, 6, 1));
    const std::vector<CourseParticipant> participants = {{&people.views[0], 150}};
    const std::vector<PersonView> empty_pool;

    CohortConfig config;
    config.horizon_days = 50;
    config.k_override = 7;
    CHECK(course_cluster_count(participants, empty_pool, config, Rng(1)) == 7);

    config.k_override.reset();
    CHECK(course_cluster_count(participants, empty_pool, config, Rng(1)) == 0);
}

TEST_CASE("course cluster count is deterministic and serial-parallel stable") {
    const Date origin = d(2005, 1, 1);
    People people;
    Rng gen(77);
    for (int i = 0; i < 8; ++i)
        people.add("part" + std::to_string(i), origin, 400,
                   100 + static_cast<std::int32_t>(gen.below(100)), Gender::female,
                   d(1980, 6, 1));
    for (int i = 0; i < 40; ++i)
        people.add("pool" + std::to_string(i), origin, 400,
                   static_cast<std::int32_t>(gen.below(300)), Gender::female,
                   d(1978 + static_cast<int>(gen.below(5)), 6, 1));

    std::vector<CourseParticipant> participants;
    for (std::size_t i = 0; i < 8; ++i)
        participants.push_back({&people.views[i], 200});
    const std::vector<PersonView> pool(people.views.begin() + 8, people.views.end());

    CohortConfig config;
    config.horizon_days = 100;
    config.gap_k_max = 5;
    config.gap_n_refs = 10;
    config.sample_size = 5;

    const int a = course_cluster_count(participants, pool, config, Rng(9),
                                       ExecPolicy::parallel);
    const int b = course_cluster_count(participants, pool, config, Rng(9),
                                       ExecPolicy::serial);
    const int c = course_cluster_count(participants, pool, config, Rng(9),
                                       ExecPolicy::parallel);
    CHECK(a == b);
    CHECK(a == c);
    CHECK(a >= 1);
    CHECK(a <= config.gap_k_max);
}
