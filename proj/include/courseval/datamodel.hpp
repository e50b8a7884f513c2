#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "courseval/csv.hpp"
#include "courseval/dates.hpp"

namespace courseval {

enum class Gender : std::uint8_t { female, male };

enum class StudyType : std::uint8_t { compulsory, vocational, university, training_course };

/// Ordinal education level reached through regulated studies. Training
/// courses never change a citizen's level.
enum class EducationLevel : std::uint8_t { none = 0, compulsory = 1, vocational = 2, university = 3 };

enum class ContractTypology : std::uint8_t { temporary, permanent };

/// Professional family classification used by both contracts and courses.
enum class ProfessionalFamily : std::uint8_t {
    ADM, ALA, ART, BCW, CHE, COM, CSS, ELE, ENW, FOI, GRA,
    HEA, HOT, IMA, IMS, ITC, MEM, PIM, PSA, TCL, VTM, WFC,
};

inline constexpr std::size_t kFamilyCount = 22;

std::string_view family_code(ProfessionalFamily f);
std::optional<ProfessionalFamily> parse_family(std::string_view code);

std::string_view gender_code(Gender g);
std::string_view study_type_name(StudyType t);
std::string_view typology_name(ContractTypology t);

struct CitizenRecord {
    std::string citizen_id;
    Gender gender;
    Date birth_date;
};

struct StudyRecord {
    std::string citizen_id;
    StudyType study_type;
    std::string degree; // degree name; for training courses, the course reference
    Date end_date;
};

struct ContractRecord {
    std::string citizen_id;
    Date start_date;
    std::optional<Date> end_date; // absent in a sizable share of the source data
    ContractTypology typology;
    ProfessionalFamily family;
    std::string cno_code;
    std::string cnae_code;
    std::string locality_code;
    std::string sector;
    std::string economic_section;
};

struct Enrollment {
    std::string citizen_id;
    std::string course_id;
    Date completion_date;
};

struct Course {
    std::string course_id;
    std::string name;
    ProfessionalFamily family;
};

struct Reject {
    std::string dataset;
    std::size_t row; // file line number; the header is line 1
    std::string reason;
};

struct DatasetCounts {
    std::size_t rows_read = 0;
    std::size_t accepted = 0;
    std::size_t rejected = 0;
};

/// In-memory dataset after ingestion. Row-level problems become Reject
/// entries; structural problems (bad header, unreadable file) throw.
struct Dataset {
    std::vector<Course> courses;
    std::vector<CitizenRecord> citizens;
    std::vector<StudyRecord> studies; // regulated studies and training courses
    std::vector<ContractRecord> contracts;
    std::vector<Enrollment> enrollments;

    /// daysOfWork as reported in the source, kept for consistency checking;
    /// aligned with citizens.
    std::vector<std::int64_t> reported_work_days;

    std::vector<Reject> rejects;
    std::vector<std::pair<std::string, DatasetCounts>> counts;

    std::unordered_map<std::string, std::uint32_t> citizen_index;
    std::unordered_map<std::string, std::uint32_t> course_index;
    std::unordered_map<std::string, std::uint32_t> course_name_index;

    // Aligned with citizens. Contract lists are sorted by (start, end).
    std::vector<std::vector<std::uint32_t>> studies_by_citizen;
    std::vector<std::vector<std::uint32_t>> contracts_by_citizen;
    std::vector<std::vector<std::uint32_t>> enrollments_by_citizen;

    const CitizenRecord& citizen(std::uint32_t i) const { return citizens[i]; }
    std::optional<std::uint32_t> find_citizen(const std::string& id) const;
    std::optional<std::uint32_t> find_course(const std::string& id) const;

    /// Deterministic full dump, used to verify that ingestion is stable and
    /// that written outputs re-ingest to the same state.
    void dump_canonical(std::ostream& os) const;
};

struct DataPaths {
    std::string courses;
    std::string ds1; // regulated studies
    std::string ds2; // training courses
    std::string ds3; // citizens
    std::string ds4; // contracts
};

Dataset ingest(const DataPaths& paths);

Dataset ingest_tables(const csv::Table& courses_table, const csv::Table& ds3,
                      const csv::Table& ds1, const csv::Table& ds2,
                      const csv::Table& ds4);

void write_rejects_csv(std::ostream& os, std::span<const Reject> rejects);

/// Highest regulated education level completed on or before `at`.
EducationLevel education_level_at(const Dataset& data, std::uint32_t citizen, Date at);

/// Quarter-based imputation for a missing contract end date: contracts
/// starting in Q1 end May 15 of the same year, Q2 -> Aug 15, Q3 -> Nov 15,
/// Q4 -> Feb 14 of the next year; capped at the next contract's start.
Date impute_end_date(Date start, std::optional<Date> next_start);

struct ResolvedContract {
    Date start;
    Date end;
    ContractTypology typology;
    ProfessionalFamily family;
    bool end_imputed = false;
};

/// Contracts of one citizen in chronological order with all end dates
/// resolved (imputation applied where the source had none).
std::vector<ResolvedContract> resolve_contracts(const Dataset& data, std::uint32_t citizen);

} // namespace courseval
