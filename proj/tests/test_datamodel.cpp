#include <doctest.h>

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <string>

#include "courseval/csv.hpp"
#include "courseval/datamodel.hpp"

using namespace courseval;

namespace {

// A small but complete extract: two courses, three citizens, a couple of
// studies, course records and contracts. Used as the base of most cases.
const char* kCourses = "course_id,name,family\n"
                       "C01,Corporate finance,ADM\n"
                       "C02,Kitchen basics,HOT\n";

const char* kCitizens =
    "citizenId,gender,birthDate,age,numberOfStudies,daysOfWork\n"
    "P1,F,1980-04-02,43,2,900\n"
    "P2,M,1985-10-20,37,1,400\n"
    "P3,f,1979-01-31,44,1,0\n";

const char* kStudies = "citizenId,endDate,studyType,degree\n"
                       "P1,1996-06-30,compulsory,secondary school\n"
                       "P1,2000-06-30,university,maths degree\n"
                       "P2,2001-06-30,compulsory,secondary school\n"
                       "P3,1995-06-15,compulsory,secondary school\n";

const char* kCourseRecords = "citizenId,endDate,studyType,degree\n"
                             "P1,2005-03-10,training_course,C01\n"
                             "P2,2006-07-01,training_course,Kitchen basics\n";

const char* kContracts =
    "citizenId,endDate,typeCode,description,startDate,typology,cnoCode,cnoDesc,"
    "cnaeCode,cnaeDesc,economicSection,sector,localityCode,pfCode\n"
    "P1,2003-05-31,401,contract,2003-01-01,temporary,1000,x,45,y,A,private,L001,ADM\n"
    "P1,,401,contract,2004-02-10,permanent,1000,x,45,y,A,private,L001,HOT\n"
    "P2,2004-12-31,401,contract,2004-01-01,temporary,2000,x,50,y,B,public,L002,ADM\n";

Dataset make_dataset(const char* courses = kCourses, const char* citizens = kCitizens,
                     const char* studies = kStudies,
                     const char* course_records = kCourseRecords,
                     const char* contracts = kContracts) {
    return ingest_tables(csv::parse(courses), csv::parse(citizens), csv::parse(studies),
                         csv::parse(course_records), csv::parse(contracts));
}

std::size_t count_reason(const Dataset& d, const std::string& reason) {
    return static_cast<std::size_t>(
        std::count_if(d.rejects.begin(), d.rejects.end(),
                      [&](const Reject& r) { return r.reason == reason; }));
}

} // namespace

TEST_CASE("happy path ingestion") {
    const Dataset d = make_dataset();
    CHECK(d.rejects.empty());
    CHECK(d.courses.size() == 2);
    CHECK(d.citizens.size() == 3);
    CHECK(d.studies.size() == 6); // 4 regulated + 2 training course rows
    CHECK(d.contracts.size() == 3);
    CHECK(d.enrollments.size() == 2);

    REQUIRE(d.find_citizen("P2"));
    CHECK(d.citizens[*d.find_citizen("P2")].gender == Gender::male);
    CHECK(d.citizens[*d.find_citizen("P3")].gender == Gender::female); // lowercase code
    REQUIRE(d.find_course("C02"));
    CHECK(d.courses[*d.find_course("C02")].family == ProfessionalFamily::HOT);
    CHECK_FALSE(d.find_course("C99"));

    // Course records resolve by id (P1 -> C01) and by name (P2 -> C02).
    CHECK(d.enrollments[0].course_id == "C01");
    CHECK(d.enrollments[1].course_id == "C02");

    CHECK(d.reported_work_days[*d.find_citizen("P1")] == 900);

    // Per-dataset counts, in ingestion order.
    REQUIRE(d.counts.size() == 5);
    CHECK(d.counts[0].first == "courses");
    CHECK(d.counts[0].second.accepted == 2);
    CHECK(d.counts[4].first == "DS4");
    CHECK(d.counts[4].second.rows_read == 3);
}

TEST_CASE("per-citizen lists are sorted") {
    const Dataset d = make_dataset();
    const auto p1 = *d.find_citizen("P1");
    const auto& studies = d.studies_by_citizen[p1];
    REQUIRE(studies.size() == 3);
    CHECK(d.studies[studies[0]].end_date < d.studies[studies[1]].end_date);
    CHECK(d.studies[studies[1]].end_date < d.studies[studies[2]].end_date);
    const auto& contracts = d.contracts_by_citizen[p1];
    REQUIRE(contracts.size() == 2);
    CHECK(d.contracts[contracts[0]].start_date < d.contracts[contracts[1]].start_date);
}

TEST_CASE("header problems throw and name the dataset") {
    const char* missing = "course_id,name\nC01,x\n";
    CHECK_THROWS_WITH_AS(static_cast<void>(make_dataset(missing)),
                         doctest::Contains("courses"), std::runtime_error);
    const char* extra = "course_id,name,family,bonus\nC01,x,ADM,1\n";
    CHECK_THROWS_WITH_AS(static_cast<void>(make_dataset(extra)),
                         doctest::Contains("bonus"), std::runtime_error);
    const char* duplicate = "course_id,name,name,family\nC01,x,x,ADM\n";
    CHECK_THROWS_AS(static_cast<void>(make_dataset(duplicate)), std::runtime_error);
}

TEST_CASE("row-level problems become rejects with exact reasons") {
    const char* bad_courses = "course_id,name,family\n"
                              ",missing id,ADM\n"
                              "C01,twice,ADM\n"
                              "C01,twice again,ADM\n"
                              "C02,bad family,XXX\n";
    const char* bad_citizens =
        "citizenId,gender,birthDate,age,numberOfStudies,daysOfWork\n"
        "P1,F,1980-04-02,43,2,900\n"
        "P1,F,1980-04-02,43,2,900\n"
        "P4,person,1980-01-01,43,0,0\n"
        "P5,F,1980-13-01,43,0,0\n"
        "P6,F,1980-01-01,years,0,0\n"
        "P7,F,1980-01-01,43,some,0\n"
        "P8,F,1980-01-01,43,0,-5\n";
    const char* bad_studies = "citizenId,endDate,studyType,degree\n"
                              "P9,1996-06-30,compulsory,unknown person\n"
                              "P1,,compulsory,no end\n"
                              "P1,1996-06-31,compulsory,bad end\n"
                              "P1,1996-06-30,apprenticeship,bad type\n"
                              "P1,2005-03-10,training_course,smuggled course row\n"
                              "P1,1979-06-30,compulsory,before birth\n";
    const char* bad_records = "citizenId,endDate,studyType,degree\n"
                              "P1,2005-03-10,compulsory,not a course row\n"
                              "P1,2005-03-10,training_course,C77\n";
    const char* bad_contracts =
        "citizenId,endDate,typeCode,description,startDate,typology,cnoCode,cnoDesc,"
        "cnaeCode,cnaeDesc,economicSection,sector,localityCode,pfCode\n"
        "P1,2003-05-31,401,c,2003-06-01,temporary,1,x,45,y,A,private,L1,ADM\n"
        "P1,2003-05-31,401,c,2003-01-01,freelance,1,x,45,y,A,private,L1,ADM\n"
        "P1,2003-05-31,401,c,1979-01-01,temporary,1,x,45,y,A,private,L1,ADM\n";

    const Dataset d =
        make_dataset(bad_courses, bad_citizens, bad_studies, bad_records, bad_contracts);

    CHECK(count_reason(d, "empty course id") == 1);
    CHECK(count_reason(d, "duplicate course id") == 1);
    CHECK(count_reason(d, "unknown professional family code") == 1);
    CHECK(count_reason(d, "duplicate citizen id") == 1);
    CHECK(count_reason(d, "unparseable gender") == 1);
    CHECK(count_reason(d, "unparseable birthDate") == 1);
    CHECK(count_reason(d, "unparseable age") == 1);
    CHECK(count_reason(d, "unparseable numberOfStudies") == 1);
    CHECK(count_reason(d, "unparseable daysOfWork") == 1);
    CHECK(count_reason(d, "unknown citizen id") == 1);
    CHECK(count_reason(d, "missing endDate") == 1);
    CHECK(count_reason(d, "unparseable endDate") == 1);
    CHECK(count_reason(d, "unparseable studyType") == 1);
    CHECK(count_reason(d, "training course row in regulated studies dataset") == 1);
    CHECK(count_reason(d, "birth date not before study end date") == 1);
    CHECK(count_reason(d, "expected a training course row") == 1);
    CHECK(count_reason(d, "unknown course") == 1);
    CHECK(count_reason(d, "end date before start date") == 1);
    CHECK(count_reason(d, "unparseable typology") == 1);
    CHECK(count_reason(d, "birth date not before contract start date") == 1);

    // Rejected rows never leak into the tables; the one clean course (C01)
    // and one clean citizen (P1) survive.
    CHECK(d.courses.size() == 1);
    CHECK(d.citizens.size() == 1);
    CHECK(d.studies.empty());
    CHECK(d.contracts.empty());

    // Row numbers refer to file lines (header is line 1).
    const auto it = std::find_if(d.rejects.begin(), d.rejects.end(), [](const Reject& r) {
        return r.reason == "unknown professional family code";
    });
    REQUIRE(it != d.rejects.end());
    CHECK(it->dataset == "courses");
    CHECK(it->row == 5);
}

TEST_CASE("rejects csv writer") {
    const std::vector<Reject> rejects = {{"courses", 2, "empty course id"}};
    std::ostringstream os;
    write_rejects_csv(os, rejects);
    CHECK(os.str() == "dataset,row,reason\ncourses,2,empty course id\n");
}

TEST_CASE("end date imputation covers all start months") {
    const auto at = [](int y, unsigned m, unsigned day) { return Date::from_ymd(y, m, day); };
    CHECK(impute_end_date(at(2010, 1, 7), {}) == at(2010, 5, 15));
    CHECK(impute_end_date(at(2010, 2, 28), {}) == at(2010, 5, 15));
    CHECK(impute_end_date(at(2010, 3, 31), {}) == at(2010, 5, 15));
    CHECK(impute_end_date(at(2010, 4, 1), {}) == at(2010, 8, 15));
    CHECK(impute_end_date(at(2010, 5, 15), {}) == at(2010, 8, 15));
    CHECK(impute_end_date(at(2010, 6, 30), {}) == at(2010, 8, 15));
    CHECK(impute_end_date(at(2010, 7, 4), {}) == at(2010, 11, 15));
    CHECK(impute_end_date(at(2010, 8, 23), {}) == at(2010, 11, 15));
    CHECK(impute_end_date(at(2010, 9, 1), {}) == at(2010, 11, 15));
    // October through December roll into February of the next year.
    CHECK(impute_end_date(at(2010, 10, 2), {}) == at(2011, 2, 14));
    CHECK(impute_end_date(at(2010, 11, 30), {}) == at(2011, 2, 14));
    CHECK(impute_end_date(at(2010, 12, 31), {}) == at(2011, 2, 14));

    // The next contract's start caps the imputed date; later starts do not.
    CHECK(impute_end_date(at(2010, 1, 7), at(2010, 3, 1)) == at(2010, 3, 1));
    CHECK(impute_end_date(at(2010, 1, 7), at(2010, 7, 1)) == at(2010, 5, 15));
}

TEST_CASE("contract resolution imputes and caps") {
    const Dataset d = make_dataset();
    const auto p1 = *d.find_citizen("P1");
    const auto resolved = resolve_contracts(d, p1);
    REQUIRE(resolved.size() == 2);
    CHECK(resolved[0].start == Date::from_ymd(2003, 1, 1));
    CHECK(resolved[0].end == Date::from_ymd(2003, 5, 31));
    CHECK_FALSE(resolved[0].end_imputed);
    // Second contract (Feb 2004 start, no end) imputes to May 15 2004.
    CHECK(resolved[1].end == Date::from_ymd(2004, 5, 15));
    CHECK(resolved[1].end_imputed);
    CHECK(resolved[1].typology == ContractTypology::permanent);
}

TEST_CASE("education level progression") {
    const Dataset d = make_dataset();
    const auto p1 = *d.find_citizen("P1");
    CHECK(education_level_at(d, p1, Date::from_ymd(1995, 1, 1)) == EducationLevel::none);
    CHECK(education_level_at(d, p1, Date::from_ymd(1996, 6, 30)) ==
          EducationLevel::compulsory); // inclusive on the end date
    CHECK(education_level_at(d, p1, Date::from_ymd(1999, 12, 31)) ==
          EducationLevel::compulsory);
    CHECK(education_level_at(d, p1, Date::from_ymd(2000, 6, 30)) ==
          EducationLevel::university);
    // Training courses never change the level.
    CHECK(education_level_at(d, p1, Date::from_ymd(2010, 1, 1)) ==
          EducationLevel::university);
}

TEST_CASE("canonical dump is stable across re-ingestion") {
    const Dataset a = make_dataset();
    const Dataset b = make_dataset();
    std::ostringstream da, db;
    a.dump_canonical(da);
    b.dump_canonical(db);
    CHECK(da.str() == db.str());
    CHECK(da.str().find("P1") != std::string::npos);
}

TEST_CASE("enum codes round trip") {
    for (std::size_t i = 0; i < kFamilyCount; ++i) {
        const auto f = static_cast<ProfessionalFamily>(i);
        const auto parsed = parse_family(family_code(f));
        REQUIRE(parsed);
        CHECK(*parsed == f);
    }
    CHECK_FALSE(parse_family("ZZZ"));
    CHECK(gender_code(Gender::female) == "F");
    CHECK(study_type_name(StudyType::training_course) == "training_course");
    CHECK(typology_name(ContractTypology::permanent) == "permanent");
}
