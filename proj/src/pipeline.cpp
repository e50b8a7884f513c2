#include "courseval/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include "courseval/csv.hpp"
#include "courseval/rng.hpp"

namespace courseval {

namespace {

namespace fs = std::filesystem;

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string join_path(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write file: " + path);
    out << content;
}

/// Total days covered by the union of [start, end] intervals.
std::int64_t union_days(std::span<const ResolvedContract> contracts) {
    std::vector<std::pair<std::int32_t, std::int32_t>> spans;
    for (const ResolvedContract& c : contracts)
        spans.emplace_back(c.start.days(), c.end.days());
    std::sort(spans.begin(), spans.end());
    std::int64_t total = 0;
    std::int64_t cur_start = 0, cur_end = -1;
    bool open = false;
    for (const auto& [s, e] : spans) {
        if (open && s <= cur_end + 1) {
            cur_end = std::max<std::int64_t>(cur_end, e);
        } else {
            if (open)
                total += cur_end - cur_start + 1;
            cur_start = s;
            cur_end = e;
            open = true;
        }
    }
    if (open)
        total += cur_end - cur_start + 1;
    return total;
}

void write_exclusions_csv(std::ostream& os, std::span<const Exclusion> rows) {
    os << "stage,citizen_id,course_id,reason\n";
    for (const Exclusion& e : rows)
        os << e.stage << ',' << csv::escape(e.citizen_id) << ',' << csv::escape(e.course_id)
           << ',' << csv::escape(e.reason) << '\n';
}

} // namespace

Date max_data_date(const Dataset& data) {
    bool any = false;
    Date best;
    const auto update = [&](Date d) {
        if (!any || d > best) {
            best = d;
            any = true;
        }
    };
    for (const StudyRecord& s : data.studies)
        update(s.end_date);
    for (const ContractRecord& c : data.contracts) {
        update(c.start_date);
        if (c.end_date)
            update(*c.end_date);
    }
    for (const Enrollment& e : data.enrollments)
        update(e.completion_date);
    if (!any)
        throw std::runtime_error("cannot infer the as-of date: the data has no dated rows");
    return best;
}

Population build_population(const Dataset& data, std::optional<Date> as_of,
                            ExecPolicy policy) {
    Population pop;
    pop.as_of = as_of ? *as_of : max_data_date(data);

    std::vector<std::pair<std::uint32_t, Date>> eligible;
    for (std::uint32_t ci = 0; ci < data.citizens.size(); ++ci) {
        Date origin;
        try {
            origin = determine_origin(data, ci);
        } catch (const NoWorkingLifeError&) {
            pop.notes.push_back({"population", data.citizens[ci].citizen_id, "",
                                 "no contracts or regulated studies"});
            continue;
        }
        if (origin > pop.as_of) {
            pop.notes.push_back({"population", data.citizens[ci].citizen_id, "",
                                 "working life starts after the as-of date"});
            continue;
        }
        eligible.emplace_back(ci, origin);
    }

    const std::size_t n = eligible.size();
    pop.citizen_of.resize(n);
    pop.contracts.resize(n);
    pop.curves.resize(n);
    pop.enrolled.assign(n, 0);
    std::vector<int> clipped(n, 0);

    const auto build_slot = [&](std::size_t slot) {
        const auto [ci, origin] = eligible[slot];
        pop.citizen_of[slot] = ci;
        pop.contracts[slot] = resolve_contracts(data, ci);
        pop.curves[slot] = build_curve(data.citizens[ci].citizen_id, origin,
                                       pop.contracts[slot], pop.as_of, &clipped[slot]);
    };

    if (policy == ExecPolicy::parallel) {
        const std::int64_t total = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic)
        for (std::int64_t i = 0; i < total; ++i)
            build_slot(static_cast<std::size_t>(i));
    } else {
        for (std::size_t i = 0; i < n; ++i)
            build_slot(i);
    }
    for (const int c : clipped)
        pop.clipped_contracts += c;

    pop.views.resize(n);
    for (std::size_t slot = 0; slot < n; ++slot) {
        const std::uint32_t ci = pop.citizen_of[slot];
        const CitizenRecord& citizen = data.citizens[ci];
        std::vector<StudyRecord> studies;
        for (const std::uint32_t s : data.studies_by_citizen[ci])
            studies.push_back(data.studies[s]);
        PersonView view;
        view.id = citizen.citizen_id;
        view.curve = &pop.curves[slot];
        view.gender = citizen.gender;
        view.birth = citizen.birth_date;
        view.education_steps = education_steps_from(studies);
        pop.views[slot] = std::move(view);
        pop.slot_by_id.emplace(citizen.citizen_id, static_cast<std::uint32_t>(slot));
        pop.enrolled[slot] = data.enrollments_by_citizen[ci].empty() ? 0 : 1;
    }
    return pop;
}

namespace {

struct CoursePool {
    std::vector<PersonView> views;
    std::vector<std::uint32_t> slots; // aligned population slots
};

struct EntryOutcome {
    bool excluded = false;
    std::string reason;
    ControlGroup group;
    std::array<double, 4> raw{};
    std::array<double, 4> p{};
    int control_n = 0;
};

} // namespace

RankArtifacts run_rank(const Dataset& data, const RunConfig& config) {
    config.cohort.validate();
    config.bounds.validate(kAllCriteria.size());
    if (config.min_participants < 1)
        throw std::invalid_argument("run config: min_participants must be >= 1");
    fs::create_directories(config.out_dir);

    RankArtifacts art;
    Population pop = build_population(data, config.as_of, config.policy);
    art.exclusions = pop.notes;

    // Evaluable enrollments grouped by course, in (course, citizen,
    // completion) order so every later stage is deterministic.
    struct Entry {
        std::uint32_t slot;
        std::int32_t t_i;
    };
    std::vector<std::uint32_t> enrollment_order(data.enrollments.size());
    for (std::uint32_t i = 0; i < enrollment_order.size(); ++i)
        enrollment_order[i] = i;
    std::sort(enrollment_order.begin(), enrollment_order.end(),
              [&](std::uint32_t a, std::uint32_t b) {
                  const Enrollment& ea = data.enrollments[a];
                  const Enrollment& eb = data.enrollments[b];
                  if (ea.course_id != eb.course_id)
                      return ea.course_id < eb.course_id;
                  if (ea.citizen_id != eb.citizen_id)
                      return ea.citizen_id < eb.citizen_id;
                  if (ea.completion_date != eb.completion_date)
                      return ea.completion_date < eb.completion_date;
                  return a < b;
              });

    std::map<std::string, std::vector<Entry>> per_course;
    std::map<std::string, int> enrollments_by_course;
    for (const std::uint32_t ei : enrollment_order) {
        const Enrollment& e = data.enrollments[ei];
        ++enrollments_by_course[e.course_id];
        const auto it = pop.slot_by_id.find(e.citizen_id);
        if (it == pop.slot_by_id.end()) {
            art.exclusions.push_back(
                {"cohort", e.citizen_id, e.course_id, "no working life curve"});
            continue;
        }
        const std::uint32_t slot = it->second;
        const WorkingLifeCurve& curve = pop.curves[slot];
        if (e.completion_date < curve.origin) {
            art.exclusions.push_back({"cohort", e.citizen_id, e.course_id,
                                      "completed before the working life origin"});
            continue;
        }
        const std::int32_t t_i = curve.day_of_date(e.completion_date);
        if (static_cast<std::int64_t>(t_i) + config.cohort.horizon_days >
            curve.length_days) {
            art.exclusions.push_back({"cohort", e.citizen_id, e.course_id,
                                      "outcome window extends past the as-of date"});
            continue;
        }
        per_course[e.course_id].push_back({slot, t_i});
    }

    // Base candidate pool: citizens who never enrolled in any course.
    CoursePool base_pool;
    for (std::uint32_t slot = 0; slot < pop.views.size(); ++slot) {
        if (!pop.enrolled[slot]) {
            base_pool.views.push_back(pop.views[slot]);
            base_pool.slots.push_back(slot);
        }
    }

    std::map<std::string, std::set<std::string>> enrolled_ids_by_course;
    if (config.pool_includes_other_participants)
        for (const Enrollment& e : data.enrollments)
            enrolled_ids_by_course[e.course_id].insert(e.citizen_id);

    const Rng root(config.cohort.seed);
    std::ostringstream control_csv;
    control_csv << "subject_id,course_id,member_id,distance,flag\n";

    std::vector<std::string> matrix_labels;
    std::vector<double> matrix_values;

    for (const auto& [course_id, entries] : per_course) {
        const Course& course = data.courses[*data.find_course(course_id)];

        const CoursePool* pool = &base_pool;
        CoursePool course_pool;
        if (config.pool_includes_other_participants) {
            course_pool = base_pool;
            const auto& own = enrolled_ids_by_course[course_id];
            for (std::uint32_t slot = 0; slot < pop.views.size(); ++slot) {
                if (pop.enrolled[slot] && !own.count(pop.views[slot].id)) {
                    course_pool.views.push_back(pop.views[slot]);
                    course_pool.slots.push_back(slot);
                }
            }
            pool = &course_pool;
        }

        std::vector<CourseParticipant> participants;
        participants.reserve(entries.size());
        for (const Entry& e : entries)
            participants.push_back({&pop.views[e.slot], e.t_i});

        const Rng course_rng = root.child(fnv1a64(course_id));
        const int k = course_cluster_count(participants, pool->views, config.cohort,
                                           course_rng, config.policy);
        if (k == 0) {
            art.exclusions.push_back(
                {"ranking", "", course_id, "no participant has matching candidates"});
            art.k_by_course[course_id] = 0;
            continue;
        }
        art.k_by_course[course_id] = k;

        std::vector<EntryOutcome> outcomes(entries.size());
        const auto evaluate = [&](std::size_t i) {
            const Entry& e = entries[i];
            EntryOutcome& out = outcomes[i];
            auto group = build_control_group(pop.views[e.slot], e.t_i, pool->views, k,
                                             config.cohort, ExecPolicy::serial);
            if (!group) {
                out.excluded = true;
                out.reason = "no matching candidates";
                return;
            }
            out.group = std::move(*group);
            out.control_n = static_cast<int>(out.group.members.size());
            std::vector<double> controls(out.group.members.size());
            for (std::size_t c = 0; c < kAllCriteria.size(); ++c) {
                const Criterion crit = kAllCriteria[c];
                out.raw[c] = criterion_value(pop.contracts[e.slot],
                                             pop.curves[e.slot].origin, e.t_i,
                                             config.cohort.horizon_days, course.family, crit);
                for (std::size_t m = 0; m < out.group.members.size(); ++m) {
                    const std::uint32_t mslot = pool->slots[out.group.members[m]];
                    controls[m] = criterion_value(pop.contracts[mslot],
                                                  pop.curves[mslot].origin, e.t_i,
                                                  config.cohort.horizon_days,
                                                  course.family, crit);
                }
                out.p[c] = out.control_n >= 2
                               ? outcome_pvalue(out.raw[c], controls, higher_is_better(crit))
                               : std::numeric_limits<double>::quiet_NaN();
            }
        };

        if (config.policy == ExecPolicy::parallel) {
            const std::int64_t total = static_cast<std::int64_t>(entries.size());
#pragma omp parallel for schedule(dynamic)
            for (std::int64_t i = 0; i < total; ++i)
                evaluate(static_cast<std::size_t>(i));
        } else {
            for (std::size_t i = 0; i < entries.size(); ++i)
                evaluate(i);
        }

        std::vector<ParticipantScore> course_scores;
        int scored = 0;
        for (std::size_t i = 0; i < entries.size(); ++i) {
            const Entry& e = entries[i];
            const EntryOutcome& out = outcomes[i];
            const std::string& subject_id = pop.views[e.slot].id;
            if (out.excluded) {
                art.exclusions.push_back({"cohort", subject_id, course_id, out.reason});
                continue;
            }
            const char* flag = out.group.fallback ? "fallback" : "ok";
            for (std::size_t m = 0; m < out.group.members.size(); ++m) {
                control_csv << subject_id << ',' << course_id << ','
                            << pool->views[out.group.members[m]].id << ','
                            << fmt_double(out.group.distances[m]) << ',' << flag << '\n';
            }
            bool any_p = false;
            for (std::size_t c = 0; c < kAllCriteria.size(); ++c) {
                ParticipantScore score;
                score.citizen_id = subject_id;
                score.course_id = course_id;
                score.criterion = kAllCriteria[c];
                score.raw_value = out.raw[c];
                score.p_value = out.p[c];
                score.control_n = out.control_n;
                if (!std::isnan(out.p[c]))
                    any_p = true;
                course_scores.push_back(std::move(score));
            }
            if (any_p)
                ++scored;
        }
        art.scored_by_course[course_id] = scored;

        std::string reason;
        const auto perf =
            course_performance(course_id, course_scores, config.min_participants, &reason);
        for (ParticipantScore& s : course_scores)
            art.scores.push_back(std::move(s));
        if (!perf) {
            art.exclusions.push_back({"ranking", "", course_id, reason});
            continue;
        }
        matrix_labels.push_back(course_id);
        for (const double p : perf->mean_p)
            matrix_values.push_back(p);
    }

    if (matrix_labels.empty())
        throw std::runtime_error("no course has enough scored participants to rank");

    art.matrix.alternatives = matrix_labels;
    for (const Criterion c : kAllCriteria) {
        art.matrix.criteria.emplace_back(criterion_name(c));
        art.matrix.directions.push_back(Direction::cost); // smaller mean p is better
    }
    art.matrix.values = matrix_values;
    art.ranking = rank_alternatives(art.matrix, config.bounds, config.policy);

    // ------------------------------------------------------------- artifacts
    const auto emit = [&](const std::string& name, const std::string& content) {
        const std::string path = join_path(config.out_dir, name);
        write_text_file(path, content);
        art.output_files.push_back(name);
    };

    {
        std::ostringstream os;
        write_rejects_csv(os, data.rejects);
        emit("rejects.csv", os.str());
    }
    {
        std::ostringstream os;
        write_exclusions_csv(os, art.exclusions);
        emit("exclusions.csv", os.str());
    }
    emit("control_groups.csv", control_csv.str());
    {
        std::ostringstream os;
        os << "citizen_id,course_id,criterion,raw_value,p_value,control_n\n";
        for (const ParticipantScore& s : art.scores) {
            os << s.citizen_id << ',' << s.course_id << ',' << criterion_name(s.criterion)
               << ',' << fmt_double(s.raw_value) << ','
               << (std::isnan(s.p_value) ? std::string() : fmt_double(s.p_value)) << ','
               << s.control_n << '\n';
        }
        emit("participant_scores.csv", os.str());
    }
    {
        std::ostringstream os;
        write_decision_matrix_csv(os, art.matrix);
        emit("decision_matrix.csv", os.str());
    }
    {
        std::ostringstream os;
        write_ranking_csv(os, art.ranking);
        emit("ranking.csv", os.str());
    }
    {
        std::ostringstream os;
        os << "course_id,name,family,k_used,enrollments,scored,ranked\n";
        const std::set<std::string> ranked(matrix_labels.begin(), matrix_labels.end());
        std::vector<std::uint32_t> order(data.courses.size());
        for (std::uint32_t i = 0; i < order.size(); ++i)
            order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
            return data.courses[a].course_id < data.courses[b].course_id;
        });
        for (const std::uint32_t i : order) {
            const Course& c = data.courses[i];
            const auto k_it = art.k_by_course.find(c.course_id);
            const auto n_it = enrollments_by_course.find(c.course_id);
            const auto s_it = art.scored_by_course.find(c.course_id);
            os << c.course_id << ',' << csv::escape(c.name) << ',' << family_code(c.family)
               << ',' << (k_it == art.k_by_course.end() ? 0 : k_it->second) << ','
               << (n_it == enrollments_by_course.end() ? 0 : n_it->second) << ','
               << (s_it == art.scored_by_course.end() ? 0 : s_it->second) << ','
               << (ranked.count(c.course_id) ? "yes" : "no") << '\n';
        }
        emit("course_summary.csv", os.str());
    }
    {
        const auto rows = quartile_report(art.ranking, art.scored_by_course);
        std::ostringstream os;
        write_quartile_report_csv(os, rows);
        emit("quartile_report.csv", os.str());
    }
    {
        std::map<std::string, std::string> family_of;
        for (const Course& c : data.courses)
            family_of[c.course_id] = std::string(family_code(c.family));
        std::ostringstream os;
        write_family_quartiles_csv(os, family_quartiles(art.ranking, family_of));
        emit("family_quartiles.csv", os.str());
    }
    {
        std::ostringstream os;
        os << "citizen_id,origin,length_days,employed_days,final_value\n";
        std::vector<std::uint32_t> order(pop.views.size());
        for (std::uint32_t i = 0; i < order.size(); ++i)
            order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
            return pop.views[a].id < pop.views[b].id;
        });
        for (const std::uint32_t slot : order) {
            const WorkingLifeCurve& c = pop.curves[slot];
            os << c.citizen_id << ',' << c.origin.to_string() << ',' << c.length_days << ','
               << c.cumulative.back() << ',' << fmt_double(c.values.back()) << '\n';
        }
        emit("wlc_index.csv", os.str());
    }
    for (const std::string& id : config.export_curves) {
        const auto it = pop.slot_by_id.find(id);
        if (it == pop.slot_by_id.end())
            throw std::runtime_error("cannot export curve, unknown citizen id: " + id);
        std::ostringstream os;
        write_curve_csv(os, pop.curves[it->second]);
        emit("wlc_" + id + ".csv", os.str());
    }

    // Manifest last: it hashes everything written above. No timestamps or
    // machine details, so reruns with the same inputs match byte for byte.
    {
        std::map<std::string, std::string> kv;
        kv["as_of"] = pop.as_of.to_string();
        kv["bounds.k1"] = fmt_double(config.bounds.k1);
        kv["bounds.lower"] = fmt_double(config.bounds.lower);
        kv["bounds.upper"] = fmt_double(config.bounds.upper);
        kv["cohort.age_window_years"] = std::to_string(config.cohort.age_window_years);
        kv["cohort.gap_k_max"] = std::to_string(config.cohort.gap_k_max);
        kv["cohort.gap_n_refs"] = std::to_string(config.cohort.gap_n_refs);
        kv["cohort.horizon_days"] = std::to_string(config.cohort.horizon_days);
        kv["cohort.k_override"] = config.cohort.k_override
                                      ? std::to_string(*config.cohort.k_override)
                                      : std::string("auto");
        kv["cohort.nn_cap"] = std::to_string(config.cohort.nn_cap);
        kv["cohort.sample_size"] = std::to_string(config.cohort.sample_size);
        kv["cohort.seed"] = std::to_string(config.cohort.seed);
        kv["cohort.stride"] = std::to_string(config.cohort.stride);
        kv["courses.ranked"] = std::to_string(matrix_labels.size());
        kv["courses.total"] = std::to_string(data.courses.size());
        kv["min_participants"] = std::to_string(config.min_participants);
        kv["pool.includes_other_participants"] =
            config.pool_includes_other_participants ? "true" : "false";
        kv["pool.size"] = std::to_string(base_pool.views.size());
        kv["population.clipped_contracts"] = std::to_string(pop.clipped_contracts);
        kv["population.size"] = std::to_string(pop.views.size());
        for (const auto& [name, counts] : data.counts) {
            kv["counts." + name + ".read"] = std::to_string(counts.rows_read);
            kv["counts." + name + ".accepted"] = std::to_string(counts.accepted);
            kv["counts." + name + ".rejected"] = std::to_string(counts.rejected);
        }
        const auto add_input = [&](const std::string& key, const std::string& path) {
            kv["input." + key] = path;
            char buf[24];
            std::snprintf(buf, sizeof(buf), "%016llx",
                          static_cast<unsigned long long>(fnv1a64_file(path)));
            kv["input." + key + ".hash"] = buf;
        };
        add_input("courses", config.inputs.courses);
        add_input("ds1", config.inputs.ds1);
        add_input("ds2", config.inputs.ds2);
        add_input("ds3", config.inputs.ds3);
        add_input("ds4", config.inputs.ds4);
        for (const std::string& name : art.output_files) {
            char buf[24];
            std::snprintf(buf, sizeof(buf), "%016llx",
                          static_cast<unsigned long long>(
                              fnv1a64_file(join_path(config.out_dir, name))));
            kv["output." + name + ".hash"] = buf;
        }
        std::ostringstream os;
        for (const auto& [key, value] : kv)
            os << key << '=' << value << '\n';
        emit("manifest.txt", os.str());
    }
    return art;
}

void run_validate(const Dataset& data, const RunConfig& config, std::ostream& console) {
    fs::create_directories(config.out_dir);
    {
        std::ostringstream os;
        write_rejects_csv(os, data.rejects);
        write_text_file(join_path(config.out_dir, "rejects.csv"), os.str());
    }

    std::size_t mismatches = 0;
    {
        std::ostringstream os;
        os << "citizen_id,reported_days,recomputed_days\n";
        for (std::uint32_t ci = 0; ci < data.citizens.size(); ++ci) {
            const auto resolved = resolve_contracts(data, ci);
            const std::int64_t recomputed = union_days(resolved);
            if (recomputed != data.reported_work_days[ci]) {
                ++mismatches;
                os << data.citizens[ci].citizen_id << ',' << data.reported_work_days[ci]
                   << ',' << recomputed << '\n';
            }
        }
        write_text_file(join_path(config.out_dir, "work_days_report.csv"), os.str());
    }
    {
        std::ostringstream os;
        for (const auto& [name, counts] : data.counts) {
            os << name << ".read=" << counts.rows_read << '\n';
            os << name << ".accepted=" << counts.accepted << '\n';
            os << name << ".rejected=" << counts.rejected << '\n';
        }
        write_text_file(join_path(config.out_dir, "ingest_summary.txt"), os.str());
    }

    console << "datasets:\n";
    for (const auto& [name, counts] : data.counts)
        console << "  " << name << ": " << counts.rows_read << " rows, " << counts.accepted
                << " accepted, " << counts.rejected << " rejected\n";
    console << "rejected rows: " << data.rejects.size() << '\n';
    console << "work-day mismatches (reported vs recomputed): " << mismatches << '\n';
}

SweepResult run_sensitivity(const std::string& matrix_csv, const std::string& out_dir,
                            const SweepConfig& config, ExecPolicy policy) {
    fs::create_directories(out_dir);
    const DecisionMatrix matrix = read_decision_matrix_csv(matrix_csv);
    SweepResult result = sweep(matrix, config, policy);
    {
        std::ostringstream os;
        write_sweep_csv(os, result);
        write_text_file(join_path(out_dir, "sensitivity.csv"), os.str());
    }
    {
        std::ostringstream os;
        for (const std::string& note : result.notes)
            os << note << '\n';
        write_text_file(join_path(out_dir, "sensitivity_notes.txt"), os.str());
    }
    return result;
}

void run_report(const std::string& out_dir, std::ostream& console) {
    const Ranking ranking = read_ranking_csv(join_path(out_dir, "ranking.csv"));

    std::map<std::string, int> scored_by_course;
    std::map<std::string, std::string> family_of;
    {
        const csv::Table t = csv::read_file(join_path(out_dir, "course_summary.csv"));
        const std::vector<std::string> expected = {"course_id", "name", "family", "k_used",
                                                   "enrollments", "scored", "ranked"};
        if (t.header != expected)
            throw std::runtime_error("course_summary.csv: unexpected header");
        for (const auto& row : t.rows) {
            family_of[row[0]] = row[2];
            scored_by_course[row[0]] = std::stoi(row[5]);
        }
    }

    const auto rows = quartile_report(ranking, scored_by_course);
    {
        std::ostringstream os;
        write_quartile_report_csv(os, rows);
        write_text_file(join_path(out_dir, "quartile_report.csv"), os.str());
    }
    {
        std::ostringstream os;
        write_family_quartiles_csv(os, family_quartiles(ranking, family_of));
        write_text_file(join_path(out_dir, "family_quartiles.csv"), os.str());
    }

    console << "ranked courses: " << ranking.rows.size() << '\n';
    console << "top of the ranking:\n";
    const std::size_t show = std::min<std::size_t>(6, ranking.rows.size());
    for (std::size_t i = 0; i < show; ++i) {
        const RankedAlternative& r = ranking.rows[i];
        char line[160];
        std::snprintf(line, sizeof(line), "  %2d. %-12s [%0.4f, %0.4f] uw=%0.4f q%d\n",
                      r.position, r.label.c_str(), r.r_min, r.r_max, r.mixed, r.quartile);
        console << line;
    }
    console << "students per quartile:\n";
    for (const QuartileRow& q : rows) {
        char line[120];
        std::snprintf(line, sizeof(line), "  q%d: %d courses, %d students (%.1f%%)\n",
                      q.quartile, q.courses, q.students, q.pct_students);
        console << line;
    }
}

std::vector<QuartileRow> quartile_report(const Ranking& ranking,
                                         const std::map<std::string, int>& students_by_course) {
    std::vector<QuartileRow> rows(4);
    for (int q = 0; q < 4; ++q)
        rows[static_cast<std::size_t>(q)].quartile = q + 1;
    std::int64_t total_students = 0;
    for (const RankedAlternative& r : ranking.rows) {
        if (r.quartile < 1 || r.quartile > 4)
            throw std::invalid_argument("quartile_report: quartile out of range");
        auto& row = rows[static_cast<std::size_t>(r.quartile - 1)];
        ++row.courses;
        const auto it = students_by_course.find(r.label);
        const int students = it == students_by_course.end() ? 0 : it->second;
        row.students += students;
        total_students += students;
    }
    for (QuartileRow& row : rows)
        row.pct_students = total_students
                               ? 100.0 * static_cast<double>(row.students) /
                                     static_cast<double>(total_students)
                               : 0.0;
    return rows;
}

void write_quartile_report_csv(std::ostream& os, std::span<const QuartileRow> rows) {
    os << "quartile,courses,students,pct_students\n";
    int courses = 0, students = 0;
    double pct = 0.0;
    for (const QuartileRow& row : rows) {
        os << row.quartile << ',' << row.courses << ',' << row.students << ','
           << fmt_double(row.pct_students) << '\n';
        courses += row.courses;
        students += row.students;
        pct += row.pct_students;
    }
    os << "total," << courses << ',' << students << ',' << fmt_double(pct) << '\n';
}

std::map<std::string, std::array<int, 4>>
family_quartiles(const Ranking& ranking, const std::map<std::string, std::string>& family_of) {
    std::map<std::string, std::array<int, 4>> table;
    for (const RankedAlternative& r : ranking.rows) {
        const auto it = family_of.find(r.label);
        if (it == family_of.end())
            throw std::invalid_argument("family_quartiles: no family for " + r.label);
        auto& row = table[it->second];
        ++row[static_cast<std::size_t>(r.quartile - 1)];
    }
    return table;
}

void write_family_quartiles_csv(std::ostream& os,
                                const std::map<std::string, std::array<int, 4>>& table) {
    os << "family,q1,q2,q3,q4\n";
    for (const auto& [family, counts] : table)
        os << family << ',' << counts[0] << ',' << counts[1] << ',' << counts[2] << ','
           << counts[3] << '\n';
}

std::uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open file for hashing: " + path);
    std::uint64_t h = 0xCBF29CE484222325ull;
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof(buf));
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001B3ull;
        }
    }
    return h;
}

} // namespace courseval
