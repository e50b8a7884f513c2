#include "courseval/datamodel.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <functional>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <tuple>

namespace courseval {

namespace {

constexpr std::array<std::string_view, kFamilyCount> kFamilyCodes = {
    "ADM", "ALA", "ART", "BCW", "CHE", "COM", "CSS", "ELE", "ENW", "FOI", "GRA",
    "HEA", "HOT", "IMA", "IMS", "ITC", "MEM", "PIM", "PSA", "TCL", "VTM", "WFC",
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t'))
        s.remove_suffix(1);
    return s;
}

std::string lower(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z')
            c += 'a' - 'A';
    return out;
}

bool parse_nonneg_int(std::string_view s, std::int64_t& out) {
    s = trim(s);
    if (s.empty())
        return false;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
    return ec == std::errc() && ptr == s.data() + s.size() && out >= 0;
}

std::optional<Gender> parse_gender(std::string_view s) {
    const std::string v = lower(trim(s));
    if (v == "f")
        return Gender::female;
    if (v == "m")
        return Gender::male;
    return std::nullopt;
}

std::optional<StudyType> parse_study_type(std::string_view s) {
    const std::string v = lower(trim(s));
    if (v == "compulsory")
        return StudyType::compulsory;
    if (v == "vocational")
        return StudyType::vocational;
    if (v == "university")
        return StudyType::university;
    if (v == "training_course" || v == "training course")
        return StudyType::training_course;
    return std::nullopt;
}

std::optional<ContractTypology> parse_typology(std::string_view s) {
    const std::string v = lower(trim(s));
    if (v == "temporary")
        return ContractTypology::temporary;
    if (v == "permanent")
        return ContractTypology::permanent;
    return std::nullopt;
}

/// Validates a table header against the expected column set (order-free,
/// nothing missing, nothing extra) and resolves field positions.
class Columns {
public:
    Columns(const csv::Table& table, std::string_view dataset,
            std::initializer_list<std::string_view> expected) {
        std::unordered_map<std::string, std::size_t> positions;
        for (std::size_t i = 0; i < table.header.size(); ++i) {
            const std::string name(trim(table.header[i]));
            if (!positions.emplace(name, i).second)
                throw std::runtime_error(std::string(dataset) + ": duplicate column '" +
                                         name + "'");
        }
        for (const std::string_view want : expected) {
            const auto it = positions.find(std::string(want));
            if (it == positions.end())
                throw std::runtime_error(std::string(dataset) + ": missing column '" +
                                         std::string(want) + "'");
            index_.emplace(std::string(want), it->second);
        }
        if (positions.size() != index_.size()) {
            for (const auto& [name, pos] : positions)
                if (!index_.count(name))
                    throw std::runtime_error(std::string(dataset) + ": unknown column '" +
                                             name + "'");
        }
    }

    const std::string& get(const std::vector<std::string>& row, std::string_view name) const {
        return row[index_.at(std::string(name))];
    }

private:
    std::unordered_map<std::string, std::size_t> index_;
};

struct RowContext {
    Dataset& data;
    std::string dataset;
    std::size_t row = 0; // file line number
    DatasetCounts counts;

    RowContext(Dataset& d, std::string name) : data(d), dataset(std::move(name)) {}

    void reject(std::string reason) {
        data.rejects.push_back({dataset, row, std::move(reason)});
        ++counts.rejected;
    }
};

void ingest_courses(Dataset& data, const csv::Table& table) {
    const Columns cols(table, "courses", {"course_id", "name", "family"});
    RowContext ctx{data, "courses"};
    ctx.counts.rows_read = table.rows.size();
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        ctx.row = r + 2;
        const std::string id(trim(cols.get(row, "course_id")));
        if (id.empty()) {
            ctx.reject("empty course id");
            continue;
        }
        if (data.course_index.count(id)) {
            ctx.reject("duplicate course id");
            continue;
        }
        const auto family = parse_family(trim(cols.get(row, "family")));
        if (!family) {
            ctx.reject("unknown professional family code");
            continue;
        }
        data.course_index.emplace(id, static_cast<std::uint32_t>(data.courses.size()));
        // First occurrence wins for name lookups.
        data.course_name_index.emplace(cols.get(row, "name"),
                                       static_cast<std::uint32_t>(data.courses.size()));
        data.courses.push_back({id, cols.get(row, "name"), *family});
        ++ctx.counts.accepted;
    }
    data.counts.emplace_back("courses", ctx.counts);
}

void ingest_citizens(Dataset& data, const csv::Table& table) {
    const Columns cols(table, "DS3",
                       {"citizenId", "gender", "birthDate", "age", "numberOfStudies",
                        "daysOfWork"});
    RowContext ctx{data, "DS3"};
    ctx.counts.rows_read = table.rows.size();
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        ctx.row = r + 2;
        const std::string id(trim(cols.get(row, "citizenId")));
        if (id.empty()) {
            ctx.reject("empty citizen id");
            continue;
        }
        if (data.citizen_index.count(id)) {
            ctx.reject("duplicate citizen id");
            continue;
        }
        const auto gender = parse_gender(cols.get(row, "gender"));
        if (!gender) {
            ctx.reject("unparseable gender");
            continue;
        }
        const auto birth = Date::parse(trim(cols.get(row, "birthDate")));
        if (!birth) {
            ctx.reject("unparseable birthDate");
            continue;
        }
        std::int64_t age = 0, n_studies = 0, work_days = 0;
        if (!parse_nonneg_int(cols.get(row, "age"), age)) {
            ctx.reject("unparseable age");
            continue;
        }
        if (!parse_nonneg_int(cols.get(row, "numberOfStudies"), n_studies)) {
            ctx.reject("unparseable numberOfStudies");
            continue;
        }
        if (!parse_nonneg_int(cols.get(row, "daysOfWork"), work_days)) {
            ctx.reject("unparseable daysOfWork");
            continue;
        }
        data.citizen_index.emplace(id, static_cast<std::uint32_t>(data.citizens.size()));
        data.citizens.push_back({id, *gender, *birth});
        data.reported_work_days.push_back(work_days);
        ++ctx.counts.accepted;
    }
    data.counts.emplace_back("DS3", ctx.counts);
}

// DS1 and DS2 share a schema; `course_stream` selects which study types the
// dataset may carry and whether rows spawn enrollments.
void ingest_studies(Dataset& data, const csv::Table& table, bool course_stream) {
    const std::string name = course_stream ? "DS2" : "DS1";
    const Columns cols(table, name, {"citizenId", "endDate", "studyType", "degree"});
    RowContext ctx{data, name};
    ctx.counts.rows_read = table.rows.size();
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        ctx.row = r + 2;
        const std::string id(trim(cols.get(row, "citizenId")));
        if (id.empty()) {
            ctx.reject("empty citizen id");
            continue;
        }
        const auto citizen = data.find_citizen(id);
        if (!citizen) {
            ctx.reject("unknown citizen id");
            continue;
        }
        const std::string_view end_raw = trim(cols.get(row, "endDate"));
        if (end_raw.empty()) {
            ctx.reject("missing endDate");
            continue;
        }
        const auto end = Date::parse(end_raw);
        if (!end) {
            ctx.reject("unparseable endDate");
            continue;
        }
        const auto type = parse_study_type(cols.get(row, "studyType"));
        if (!type) {
            ctx.reject("unparseable studyType");
            continue;
        }
        if (!course_stream && *type == StudyType::training_course) {
            ctx.reject("training course row in regulated studies dataset");
            continue;
        }
        if (course_stream && *type != StudyType::training_course) {
            ctx.reject("expected a training course row");
            continue;
        }
        if (!(data.citizens[*citizen].birth_date < *end)) {
            ctx.reject("birth date not before study end date");
            continue;
        }
        const std::string& degree = cols.get(row, "degree");
        std::string course_id;
        if (course_stream) {
            auto course = data.find_course(std::string(trim(degree)));
            if (!course) {
                const auto by_name = data.course_name_index.find(degree);
                if (by_name != data.course_name_index.end())
                    course = by_name->second;
            }
            if (!course) {
                ctx.reject("unknown course");
                continue;
            }
            course_id = data.courses[*course].course_id;
        }
        data.studies.push_back({id, *type, degree, *end});
        if (course_stream)
            data.enrollments.push_back({id, course_id, *end});
        ++ctx.counts.accepted;
    }
    data.counts.emplace_back(name, ctx.counts);
}

void ingest_contracts(Dataset& data, const csv::Table& table) {
    const Columns cols(table, "DS4",
                       {"citizenId", "endDate", "typeCode", "description", "startDate",
                        "typology", "cnoCode", "cnoDesc", "cnaeCode", "cnaeDesc",
                        "economicSection", "sector", "localityCode", "pfCode"});
    RowContext ctx{data, "DS4"};
    ctx.counts.rows_read = table.rows.size();
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto& row = table.rows[r];
        ctx.row = r + 2;
        const std::string id(trim(cols.get(row, "citizenId")));
        if (id.empty()) {
            ctx.reject("empty citizen id");
            continue;
        }
        const auto citizen = data.find_citizen(id);
        if (!citizen) {
            ctx.reject("unknown citizen id");
            continue;
        }
        const auto start = Date::parse(trim(cols.get(row, "startDate")));
        if (!start) {
            ctx.reject("unparseable startDate");
            continue;
        }
        const std::string_view end_raw = trim(cols.get(row, "endDate"));
        std::optional<Date> end;
        if (!end_raw.empty()) {
            end = Date::parse(end_raw);
            if (!end) {
                ctx.reject("unparseable endDate");
                continue;
            }
            if (*end < *start) {
                ctx.reject("end date before start date");
                continue;
            }
        }
        const auto typology = parse_typology(cols.get(row, "typology"));
        if (!typology) {
            ctx.reject("unparseable typology");
            continue;
        }
        const auto family = parse_family(trim(cols.get(row, "pfCode")));
        if (!family) {
            ctx.reject("unknown professional family code");
            continue;
        }
        if (!(data.citizens[*citizen].birth_date < *start)) {
            ctx.reject("birth date not before contract start date");
            continue;
        }
        data.contracts.push_back({id, *start, end, *typology, *family,
                                  cols.get(row, "cnoCode"), cols.get(row, "cnaeCode"),
                                  cols.get(row, "localityCode"), cols.get(row, "sector"),
                                  cols.get(row, "economicSection")});
        ++ctx.counts.accepted;
    }
    data.counts.emplace_back("DS4", ctx.counts);
}

void finalize(Dataset& data) {
    const std::size_t n = data.citizens.size();
    data.studies_by_citizen.assign(n, {});
    data.contracts_by_citizen.assign(n, {});
    data.enrollments_by_citizen.assign(n, {});
    for (std::uint32_t i = 0; i < data.studies.size(); ++i)
        data.studies_by_citizen[*data.find_citizen(data.studies[i].citizen_id)].push_back(i);
    for (std::uint32_t i = 0; i < data.contracts.size(); ++i)
        data.contracts_by_citizen[*data.find_citizen(data.contracts[i].citizen_id)].push_back(i);
    for (std::uint32_t i = 0; i < data.enrollments.size(); ++i)
        data.enrollments_by_citizen[*data.find_citizen(data.enrollments[i].citizen_id)]
            .push_back(i);

    for (auto& list : data.contracts_by_citizen) {
        std::sort(list.begin(), list.end(), [&](std::uint32_t a, std::uint32_t b) {
            const auto& ca = data.contracts[a];
            const auto& cb = data.contracts[b];
            const std::int32_t ea =
                ca.end_date ? ca.end_date->days() : std::numeric_limits<std::int32_t>::max();
            const std::int32_t eb =
                cb.end_date ? cb.end_date->days() : std::numeric_limits<std::int32_t>::max();
            return std::tuple(ca.start_date.days(), ea, a) <
                   std::tuple(cb.start_date.days(), eb, b);
        });
    }
    for (auto& list : data.studies_by_citizen) {
        std::sort(list.begin(), list.end(), [&](std::uint32_t a, std::uint32_t b) {
            const auto& sa = data.studies[a];
            const auto& sb = data.studies[b];
            return std::tuple(sa.end_date.days(), static_cast<int>(sa.study_type), a) <
                   std::tuple(sb.end_date.days(), static_cast<int>(sb.study_type), b);
        });
    }
    for (auto& list : data.enrollments_by_citizen) {
        std::sort(list.begin(), list.end(), [&](std::uint32_t a, std::uint32_t b) {
            const auto& ea = data.enrollments[a];
            const auto& eb = data.enrollments[b];
            if (ea.completion_date != eb.completion_date)
                return ea.completion_date < eb.completion_date;
            if (ea.course_id != eb.course_id)
                return ea.course_id < eb.course_id;
            return a < b;
        });
    }
}

} // namespace

std::string_view family_code(ProfessionalFamily f) {
    return kFamilyCodes[static_cast<std::size_t>(f)];
}

std::optional<ProfessionalFamily> parse_family(std::string_view code) {
    for (std::size_t i = 0; i < kFamilyCodes.size(); ++i)
        if (kFamilyCodes[i] == code)
            return static_cast<ProfessionalFamily>(i);
    return std::nullopt;
}

std::string_view gender_code(Gender g) { return g == Gender::female ? "F" : "M"; }

std::string_view study_type_name(StudyType t) {
    switch (t) {
    case StudyType::compulsory: return "compulsory";
    case StudyType::vocational: return "vocational";
    case StudyType::university: return "university";
    case StudyType::training_course: return "training_course";
    }
    return "?";
}

std::string_view typology_name(ContractTypology t) {
    return t == ContractTypology::temporary ? "temporary" : "permanent";
}

std::optional<std::uint32_t> Dataset::find_citizen(const std::string& id) const {
    const auto it = citizen_index.find(id);
    if (it == citizen_index.end())
        return std::nullopt;
    return it->second;
}

std::optional<std::uint32_t> Dataset::find_course(const std::string& id) const {
    const auto it = course_index.find(id);
    if (it == course_index.end())
        return std::nullopt;
    return it->second;
}

Dataset ingest_tables(const csv::Table& courses_table, const csv::Table& ds3,
                      const csv::Table& ds1, const csv::Table& ds2,
                      const csv::Table& ds4) {
    Dataset data;
    ingest_courses(data, courses_table);
    ingest_citizens(data, ds3);
    ingest_studies(data, ds1, /*course_stream=*/false);
    ingest_studies(data, ds2, /*course_stream=*/true);
    ingest_contracts(data, ds4);
    finalize(data);
    return data;
}

Dataset ingest(const DataPaths& paths) {
    return ingest_tables(csv::read_file(paths.courses), csv::read_file(paths.ds3),
                         csv::read_file(paths.ds1), csv::read_file(paths.ds2),
                         csv::read_file(paths.ds4));
}

void write_rejects_csv(std::ostream& os, std::span<const Reject> rejects) {
    os << "dataset,row,reason\n";
    for (const Reject& r : rejects) {
        os << csv::escape(r.dataset) << ',' << r.row << ',' << csv::escape(r.reason)
           << '\n';
    }
}

void Dataset::dump_canonical(std::ostream& os) const {
    std::vector<std::uint32_t> order;

    os << "[courses]\n";
    order.resize(courses.size());
    for (std::uint32_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return courses[a].course_id < courses[b].course_id;
    });
    for (const std::uint32_t i : order)
        os << courses[i].course_id << '|' << courses[i].name << '|'
           << family_code(courses[i].family) << '\n';

    os << "[citizens]\n";
    order.resize(citizens.size());
    for (std::uint32_t i = 0; i < order.size(); ++i)
        order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        return citizens[a].citizen_id < citizens[b].citizen_id;
    });
    for (const std::uint32_t i : order) {
        os << citizens[i].citizen_id << '|' << gender_code(citizens[i].gender) << '|'
           << citizens[i].birth_date.to_string() << '|' << reported_work_days[i] << '\n';
        for (const std::uint32_t s : studies_by_citizen[i])
            os << "  study|" << study_type_name(studies[s].study_type) << '|'
               << studies[s].degree << '|' << studies[s].end_date.to_string() << '\n';
        for (const std::uint32_t c : contracts_by_citizen[i]) {
            const auto& k = contracts[c];
            os << "  contract|" << k.start_date.to_string() << '|'
               << (k.end_date ? k.end_date->to_string() : std::string("-")) << '|'
               << typology_name(k.typology) << '|' << family_code(k.family) << '|'
               << k.cno_code << '|' << k.cnae_code << '|' << k.locality_code << '|'
               << k.sector << '|' << k.economic_section << '\n';
        }
        for (const std::uint32_t e : enrollments_by_citizen[i])
            os << "  enrollment|" << enrollments[e].course_id << '|'
               << enrollments[e].completion_date.to_string() << '\n';
    }
}

EducationLevel education_level_at(const Dataset& data, std::uint32_t citizen, Date at) {
    EducationLevel level = EducationLevel::none;
    for (const std::uint32_t s : data.studies_by_citizen[citizen]) {
        const StudyRecord& study = data.studies[s];
        if (study.end_date > at)
            break; // sorted by end date
        EducationLevel step = EducationLevel::none;
        switch (study.study_type) {
        case StudyType::compulsory: step = EducationLevel::compulsory; break;
        case StudyType::vocational: step = EducationLevel::vocational; break;
        case StudyType::university: step = EducationLevel::university; break;
        case StudyType::training_course: continue;
        }
        if (step > level)
            level = step;
    }
    return level;
}

Date impute_end_date(Date start, std::optional<Date> next_start) {
    const int y = start.year();
    const unsigned m = start.month();
    Date adjusted;
    if (m <= 3)
        adjusted = Date::from_ymd(y, 5, 15);
    else if (m <= 6)
        adjusted = Date::from_ymd(y, 8, 15);
    else if (m <= 9)
        adjusted = Date::from_ymd(y, 11, 15);
    else
        adjusted = Date::from_ymd(y + 1, 2, 14);
    if (next_start && *next_start < adjusted)
        return *next_start;
    return adjusted;
}

std::vector<ResolvedContract> resolve_contracts(const Dataset& data, std::uint32_t citizen) {
    const auto& list = data.contracts_by_citizen[citizen];
    std::vector<ResolvedContract> out;
    out.reserve(list.size());
    for (std::size_t i = 0; i < list.size(); ++i) {
        const ContractRecord& c = data.contracts[list[i]];
        ResolvedContract r{c.start_date, Date{}, c.typology, c.family, false};
        if (c.end_date) {
            r.end = *c.end_date;
        } else {
            std::optional<Date> next;
            if (i + 1 < list.size())
                next = data.contracts[list[i + 1]].start_date;
            r.end = impute_end_date(c.start_date, next);
            r.end_imputed = true;
        }
        out.push_back(r);
    }
    return out;
}

} // namespace courseval
