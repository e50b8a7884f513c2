#include <doctest.h>

#include <cmath>
#include <vector>

#include "courseval/kernels.hpp"
#include "courseval/rng.hpp"
#include "courseval/wlc.hpp"

using namespace courseval;

namespace {

WorkingLifeCurve random_curve(Rng& rng, const char* id, std::int32_t len) {
    const Date origin = Date::from_ymd(2000, 1, 1);
    std::vector<ResolvedContract> cs;
    std::int32_t day = 0;
    while (day < len) {
        const auto gap = static_cast<std::int32_t>(rng.below(30));
        const auto span = static_cast<std::int32_t>(rng.below(40));
        cs.push_back({origin.plus_days(day + gap), origin.plus_days(day + gap + span),
                      ContractTypology::temporary, ProfessionalFamily::ADM, false});
        day += gap + span + 1;
    }
    return build_curve(id, origin, cs, origin.plus_days(len - 1));
}

} // namespace

TEST_CASE("euclidean distance") {
    const std::vector<double> a = {0.0, 3.0};
    const std::vector<double> b = {4.0, 0.0};
    CHECK(kernels::euclidean(a, b) == doctest::Approx(5.0));
    CHECK(kernels::euclidean(a, a) == 0.0);
}

TEST_CASE("curves_to_points samples with stride") {
    Rng rng(1);
    const auto c1 = random_curve(rng, "A", 100);
    const auto c2 = random_curve(rng, "B", 120);
    const std::vector<const WorkingLifeCurve*> curves = {&c1, &c2};

    const auto pts = kernels::curves_to_points(curves, 50, 7);
    CHECK(pts.n == 2);
    CHECK(pts.dim == 8); // days 1, 8, ..., 50
    CHECK(pts.row(0)[0] == c1.value(1));
    CHECK(pts.row(0)[1] == c1.value(8));
    CHECK(pts.row(1)[7] == c2.value(50));

    // Sampled-point distance equals the strided curve distance.
    CHECK(kernels::euclidean(pts.row(0), pts.row(1)) ==
          doctest::Approx(curve_distance(c1, c2, 50, 7)).epsilon(1e-12));

    CHECK_THROWS(static_cast<void>(kernels::curves_to_points(curves, 150)));
}

TEST_CASE("pairwise distances match the curve metric and the serial path") {
    Rng rng(2);
    std::vector<WorkingLifeCurve> curves;
    for (int i = 0; i < 12; ++i)
        curves.push_back(random_curve(rng, "X", 300));
    std::vector<const WorkingLifeCurve*> ptrs;
    for (const auto& c : curves)
        ptrs.push_back(&c);

    const auto pts = kernels::curves_to_points(ptrs, 300);
    const auto serial = kernels::pairwise_distances(pts, ExecPolicy::serial);
    const auto parallel = kernels::pairwise_distances(pts, ExecPolicy::parallel);

    REQUIRE(serial.size() == curves.size());
    REQUIRE(parallel.size() == curves.size());
    for (std::size_t i = 0; i < curves.size(); ++i) {
        CHECK(serial(i, i) == 0.0);
        for (std::size_t j = 0; j < curves.size(); ++j) {
            CHECK(serial(i, j) == parallel(i, j)); // bitwise identical
            CHECK(serial(i, j) == serial(j, i));
            if (i != j)
                CHECK(serial(i, j) ==
                      doctest::Approx(curve_distance(curves[i], curves[j], 300))
                          .epsilon(1e-12));
        }
    }
}

TEST_CASE("distances_to_subject matches per-candidate curve distances") {
    Rng rng(3);
    const auto subject = random_curve(rng, "S", 200);
    std::vector<WorkingLifeCurve> pool;
    for (int i = 0; i < 9; ++i)
        pool.push_back(random_curve(rng, "C", 250));
    std::vector<const WorkingLifeCurve*> ptrs;
    for (const auto& c : pool)
        ptrs.push_back(&c);

    const auto serial = kernels::distances_to_subject(subject, ptrs, 150, 2,
                                                      ExecPolicy::serial);
    const auto parallel = kernels::distances_to_subject(subject, ptrs, 150, 2,
                                                        ExecPolicy::parallel);
    REQUIRE(serial.size() == pool.size());
    CHECK(serial == parallel); // bitwise identical
    for (std::size_t i = 0; i < pool.size(); ++i)
        CHECK(serial[i] == doctest::Approx(curve_distance(subject, pool[i], 150, 2))
                               .epsilon(1e-12));
}
