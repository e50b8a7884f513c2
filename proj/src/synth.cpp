#include "courseval/synth.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "courseval/rng.hpp"

namespace courseval {

namespace {

std::string course_label(int i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "C%02d", i + 1);
    return buf;
}

std::string citizen_label(int i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "P%06d", i + 1);
    return buf;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write file: " + path);
    out << content;
}

int whole_years_between(Date from, Date to) {
    int years = to.year() - from.year();
    if (to.month() < from.month() ||
        (to.month() == from.month() && to.day_of_month() < from.day_of_month()))
        --years;
    return years;
}

} // namespace

void SynthConfig::validate() const {
    if (n_citizens < 1)
        throw std::invalid_argument("synth config: n_citizens must be >= 1");
    if (n_courses < 1)
        throw std::invalid_argument("synth config: n_courses must be >= 1");
    const auto share_ok = [](double s) { return s >= 0.0 && s <= 1.0; };
    if (!share_ok(participant_share) || !share_ok(permanent_share) ||
        !share_ok(missing_end_share))
        throw std::invalid_argument("synth config: shares must lie in [0, 1]");
    if (!(employment_rate > 0.0) || !(employment_rate < 1.0))
        throw std::invalid_argument("synth config: employment_rate must lie in (0, 1)");
    if (birth_year_min > birth_year_max)
        throw std::invalid_argument("synth config: birth year range is empty");
    if (completion_guard_days < 0)
        throw std::invalid_argument("synth config: completion_guard_days must be >= 0");
    for (const auto& [id, effect] : course_effects) {
        bool known = false;
        for (int i = 0; i < n_courses; ++i)
            if (course_label(i) == id)
                known = true;
        if (!known)
            throw std::invalid_argument("synth config: effect for unknown course " + id);
        if (effect < -1.0 || effect > 1.0)
            throw std::invalid_argument("synth config: effect for " + id +
                                        " outside [-1, 1]");
    }
}

SynthResult generate_synthetic(const SynthConfig& config, const std::string& out_dir) {
    config.validate();
    std::filesystem::create_directories(out_dir);

    std::unordered_map<std::string, double> effect_of;
    for (const auto& [id, effect] : config.course_effects)
        effect_of[id] = effect;

    std::ostringstream courses_csv, ds1, ds2, ds3, ds4, truth;
    courses_csv << "course_id,name,family\n";
    ds1 << "citizenId,endDate,studyType,degree\n";
    ds2 << "citizenId,endDate,studyType,degree\n";
    ds3 << "citizenId,gender,birthDate,age,numberOfStudies,daysOfWork\n";
    ds4 << "citizenId,endDate,typeCode,description,startDate,typology,cnoCode,cnoDesc,"
           "cnaeCode,cnaeDesc,economicSection,sector,localityCode,pfCode\n";
    truth << "course_id,family,effect\n";

    std::vector<ProfessionalFamily> course_family(static_cast<std::size_t>(config.n_courses));
    for (int c = 0; c < config.n_courses; ++c) {
        const auto family = static_cast<ProfessionalFamily>(c % kFamilyCount);
        course_family[static_cast<std::size_t>(c)] = family;
        const std::string id = course_label(c);
        courses_csv << id << ",Training course " << id << " (" << family_code(family)
                    << ")," << family_code(family) << '\n';
        const auto it = effect_of.find(id);
        truth << id << ',' << family_code(family) << ','
              << (it == effect_of.end() ? 0.0 : it->second) << '\n';
    }

    const Rng root(config.seed);
    const Date window_end = config.window_end;

    for (int ci = 0; ci < config.n_citizens; ++ci) {
        Rng rng = root.child(0x43495449ull, static_cast<std::uint64_t>(ci));
        const std::string id = citizen_label(ci);
        const bool female = rng.uniform() < 0.5;

        const int birth_year =
            config.birth_year_min +
            static_cast<int>(rng.below(static_cast<std::uint64_t>(
                config.birth_year_max - config.birth_year_min + 1)));
        Date birth = Date::from_ymd(birth_year, 1, 1)
                         .plus_days(static_cast<std::int32_t>(rng.below(365)));

        // Regulated studies: compulsory school for everyone, optional
        // vocational and university tracks on top.
        Date compulsory_end =
            birth.plus_days(16 * 365 + static_cast<std::int32_t>(rng.below(180)));
        const bool vocational = rng.uniform() < 0.35;
        const bool university = rng.uniform() < 0.25;
        Date vocational_end =
            compulsory_end.plus_days(365 + static_cast<std::int32_t>(rng.below(2 * 365)));
        Date university_end =
            compulsory_end.plus_days(4 * 365 + static_cast<std::int32_t>(rng.below(2 * 365)));

        Date last_study_end = compulsory_end;
        if (vocational && vocational_end > last_study_end)
            last_study_end = vocational_end;
        if (university && university_end > last_study_end)
            last_study_end = university_end;

        // Guarantee a reasonable stretch of observable working life.
        const std::int32_t latest_entry = window_end.days() - 1000;
        if (last_study_end.days() > latest_entry) {
            const std::int32_t shift = last_study_end.days() - latest_entry;
            birth = birth.plus_days(-shift);
            compulsory_end = compulsory_end.plus_days(-shift);
            vocational_end = vocational_end.plus_days(-shift);
            university_end = university_end.plus_days(-shift);
            last_study_end = last_study_end.plus_days(-shift);
        }

        int study_rows = 1;
        ds1 << id << ',' << compulsory_end.to_string() << ",compulsory,secondary school\n";
        if (vocational) {
            ds1 << id << ',' << vocational_end.to_string()
                << ",vocational,vocational diploma\n";
            ++study_rows;
        }
        if (university) {
            ds1 << id << ',' << university_end.to_string()
                << ",university,university degree\n";
            ++study_rows;
        }

        // Course participation is decided before the career simulation so the
        // employability boost can switch on at the completion day.
        const Date chain_start = last_study_end.plus_days(1);
        int course_idx = -1;
        Date completion;
        double boost = 0.0;
        if (rng.uniform() < config.participant_share) {
            const std::int32_t earliest = chain_start.days() + 180;
            const std::int32_t latest = window_end.days() - config.completion_guard_days;
            if (earliest <= latest) {
                course_idx = static_cast<int>(
                    rng.below(static_cast<std::uint64_t>(config.n_courses)));
                completion = Date(earliest + static_cast<std::int32_t>(rng.below(
                                                 static_cast<std::uint64_t>(
                                                     latest - earliest + 1))));
                const auto it = effect_of.find(course_label(course_idx));
                if (it != effect_of.end())
                    boost = it->second;
                ds2 << id << ',' << completion.to_string() << ",training_course,"
                    << course_label(course_idx) << '\n';
                ++study_rows;
            }
        }

        // Daily two-state employment chain.
        const double rate = std::clamp(
            config.employment_rate * rng.uniform(0.6, 1.4), 0.05, 0.95);
        const double p_leave = 1.0 / 240.0;
        const double p_enter_base = std::clamp(p_leave * rate / (1.0 - rate), 0.0, 1.0);

        const auto family_count = static_cast<std::uint64_t>(kFamilyCount);
        const auto home_family = static_cast<ProfessionalFamily>(rng.below(family_count));

        bool employed = false;
        std::int64_t employed_days = 0;
        std::int32_t run_start = 0;
        std::vector<std::pair<std::int32_t, std::int32_t>> runs;
        for (std::int32_t d = chain_start.days(); d <= window_end.days(); ++d) {
            double p_enter = p_enter_base;
            if (course_idx >= 0 && d > completion.days())
                p_enter = std::clamp(p_enter_base + boost, 0.0, 1.0);
            if (employed) {
                ++employed_days;
                if (rng.uniform() < p_leave) {
                    runs.emplace_back(run_start, d);
                    employed = false;
                }
            } else if (rng.uniform() < p_enter) {
                employed = true;
                run_start = d;
                ++employed_days;
                if (d == window_end.days())
                    runs.emplace_back(run_start, d);
                continue;
            }
            if (employed && d == window_end.days())
                runs.emplace_back(run_start, d);
        }

        // Each employment run becomes one or more back-to-back contracts.
        for (const auto& [rs, re] : runs) {
            std::int32_t seg_start = rs;
            while (seg_start <= re) {
                const std::int32_t max_len = re - seg_start + 1;
                const std::int32_t len = std::min<std::int32_t>(
                    max_len, 30 + static_cast<std::int32_t>(rng.below(330)));
                const Date start(seg_start);
                const Date end(seg_start + len - 1);
                const bool permanent = rng.uniform() < config.permanent_share;
                const ProfessionalFamily family =
                    rng.uniform() < 0.75
                        ? home_family
                        : static_cast<ProfessionalFamily>(rng.below(family_count));
                const bool blank_end = rng.uniform() < config.missing_end_share;

                char cno[8], locality[8];
                std::snprintf(cno, sizeof(cno), "%04u",
                              static_cast<unsigned>(rng.below(9999)));
                std::snprintf(locality, sizeof(locality), "L%03u",
                              static_cast<unsigned>(rng.below(200)));
                const char economic_section = static_cast<char>('A' + rng.below(10));
                const bool public_sector = rng.uniform() < 0.15;

                ds4 << id << ',' << (blank_end ? std::string() : end.to_string())
                    << ",401,employment contract," << start.to_string() << ','
                    << (permanent ? "permanent" : "temporary") << ',' << cno
                    << ",occupation," << static_cast<unsigned>(rng.below(90) + 10)
                    << ",activity," << economic_section << ','
                    << (public_sector ? "public" : "private") << ',' << locality << ','
                    << family_code(family) << '\n';
                seg_start += len;
            }
        }

        ds3 << id << ',' << (female ? 'F' : 'M') << ',' << birth.to_string() << ','
            << whole_years_between(birth, window_end) << ',' << study_rows << ','
            << employed_days << '\n';
    }

    SynthResult result;
    const auto emit = [&](const char* name, const std::ostringstream& content) {
        const std::string path = (std::filesystem::path(out_dir) / name).string();
        write_file(path, content.str());
        result.files.push_back(path);
        return path;
    };
    result.paths.courses = emit("courses.csv", courses_csv);
    result.paths.ds1 = emit("ds1_studies.csv", ds1);
    result.paths.ds2 = emit("ds2_course_records.csv", ds2);
    result.paths.ds3 = emit("ds3_citizens.csv", ds3);
    result.paths.ds4 = emit("ds4_contracts.csv", ds4);
    emit("truth.csv", truth);
    return result;
}

} // namespace courseval
