#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "corkscrew/io.hpp"

using namespace corkscrew;
using namespace corkscrew::io;

namespace {

std::string data_file(const std::string& f) { return std::string(CORKSCREW_DATA_DIR) + "/" + f; }

ParseError parse_failure(const std::string& text) {
    try {
        parse_complex_text(text, "t.json");
    } catch (const ParseError& e) {
        return e;
    }
    ADD_FAILURE() << "no error for " << text;
    return ParseError("", 0, 0, "");
}

const char* kTrefoil = R"J({
  "name": "T(2,3)",
  "generators": [{"id": "y0", "gr": [0, -2]}, {"id": "y1", "gr": [-1, -1]}, {"id": "y2", "gr": [-2, 0]}],
  "differential": {"y1": [["y2", 0, 1], ["y0", 1, 0]], "y0": []}
})J";

}  // namespace

TEST(ComplexFile, BundledFigureEight) {
    const LoadedComplex l = parse_complex(data_file("4_1.cfk.json"));
    const PhiIotaComplex want = figure_eight_with_actions();
    EXPECT_EQ(l.x.complex.name, "4_1");
    EXPECT_EQ(l.x.complex.generators, want.complex.generators);
    EXPECT_EQ(l.x.complex.differential, want.complex.differential);
    EXPECT_EQ(l.x.iota, want.iota);
    EXPECT_EQ(l.x.phi, want.phi);
    EXPECT_TRUE(l.iota_given && l.phi_given);
    EXPECT_TRUE(l.validation.s3_type);
}

TEST(ComplexFile, SolvesMissingActions) {
    const LoadedComplex l = parse_complex_text(kTrefoil);
    EXPECT_FALSE(l.iota_given);
    EXPECT_EQ(l.x.phi, LinearMap::identity(3));
    EXPECT_TRUE(check_actions(l.x).empty());
    EXPECT_EQ(l.x.complex.differential, torus_2(1).complex.differential);
}

TEST(ComplexFile, Errors) {
    EXPECT_EQ(parse_failure(R"({"name": "e", "generators": [], "differential": {}})").message, "no generators");
    const ParseError dup = parse_failure(
        "{\"generators\": [\n  {\"id\": \"u\", \"gr\": [0, 0]},\n  {\"id\": \"u\", \"gr\": [0, 0]}\n], "
        "\"differential\": {}}");
    EXPECT_NE(dup.message.find("'u'"), std::string::npos);
    EXPECT_EQ(dup.line, 3);
    const ParseError syntax = parse_failure("{\n  \"generators\": [\n    {\"id\": \"u\",, }\n");
    EXPECT_EQ(syntax.line, 3);
    EXPECT_GT(syntax.column, 1);
    const ParseError grading = parse_failure(
        R"({"generators": [{"id": "a", "gr": [0, 0]}, {"id": "b", "gr": [0, 0]}], "differential": {"a": [["b", 0, 0]]}})");
    EXPECT_NE(grading.message.find("bidegree"), std::string::npos);
    const ParseError unknown = parse_failure(R"({"generators": [{"id": "a", "gr": [0, 0]}], "differential": {"a": [["z", 0, 0]]}})");
    EXPECT_NE(unknown.message.find("'z'"), std::string::npos);
    const ParseError not_s3 = parse_failure(R"({"generators": [{"id": "a", "gr": [2, 2]}], "differential": {}})");
    EXPECT_NE(not_s3.message.find("S3-type"), std::string::npos);
    const ParseError bad_iota = parse_failure(
        R"({"generators": [{"id": "a", "gr": [0, 0]}], "differential": {}, "iota": {"mode": "straight", "matrix": {}}})");
    EXPECT_NE(bad_iota.message.find("skew"), std::string::npos);
}

TEST(ComplexFile, RoundTrip) {
    const std::string text = io::read_file(data_file("4_1.cfk.json"));
    EXPECT_EQ(canonical_text(text), text);
    EXPECT_EQ(serialize(parse_complex_text(text).x), canonical_text(text));
    const LoadedComplex t = parse_complex_text(kTrefoil);
    EXPECT_EQ(serialize(t.x, t.given()), canonical_text(kTrefoil));
    for (const auto& name : bundled_names()) {
        const PhiIotaComplex x = *bundled(name);
        const std::string s = serialize(x);
        EXPECT_EQ(serialize(parse_complex_text(s, name).x), s) << name;
    }
}

TEST(ComplexFile, BundledInputs) {
    EXPECT_EQ(load_input("bundled:4_1x4_1_tau").x.rank(), 25u);
    EXPECT_THROW(load_input("bundled:nope"), std::runtime_error);
    EXPECT_THROW(load_input("/nonexistent/file.json"), std::runtime_error);
}

TEST(KnotTable, Rows) {
    const KnotTable t = parse_knot_csv("bundled");
    auto row = std::find_if(t.rows.begin(), t.rows.end(), [](const KnotTableRow& r) { return r.name == "4_1"; });
    ASSERT_NE(row, t.rows.end());
    EXPECT_EQ(*row->tau, 0);
    EXPECT_TRUE(row->tau_derived);
    ASSERT_EQ(t.rejected.size(), 1u);
    EXPECT_EQ(t.rejected[0].name, "8_19");
    auto r21 = std::find_if(t.rows.begin(), t.rows.end(), [](const KnotTableRow& r) { return r.name == "8_21"; });
    ASSERT_NE(r21, t.rows.end());
    EXPECT_FALSE(r21->tau_derived);
}

TEST(KnotTable, Validation) {
    const KnotTable t = parse_knot_csv_text(
        "arf,determinant,name,signature,alternating,crossings\n"
        "1,5,4_1,0,1,4\n"
        "1,4,bad,0,1,4\n"
        "0,9,8_20,0,0,8\n"
        "1,3,3_1,-2,1,3\n"
        "0,3,wrongarf,-2,1,3\n"
        "1,x,junk,0,1,4\n");
    ASSERT_EQ(t.rows.size(), 2u);
    EXPECT_EQ(t.rows[1].name, "3_1");
    EXPECT_EQ(*t.rows[1].tau, 1);
    ASSERT_EQ(t.rejected.size(), 4u);
    EXPECT_EQ(t.rejected[0].line, 3);
    EXPECT_NE(t.rejected[0].reason.find("odd"), std::string::npos);
    EXPECT_NE(t.rejected[1].reason.find("without tau"), std::string::npos);
    EXPECT_EQ(t.rejected[3].line, 7);
    EXPECT_THROW(parse_knot_csv_text("name,crossings,alternating,signature,determinant\n"), ParseError);
}

TEST(Census, BundledTable) {
    const Census c = census(parse_knot_csv("bundled"), 8);
    const std::vector<std::string> want = {"4_1",  "5_2",  "6_3",  "7_4",  "7_5",  "7_7",  "8_1",  "8_2", "8_6",
                                           "8_7",  "8_12", "8_13", "8_14", "8_15", "8_17", "8_18", "8_21"};
    EXPECT_EQ(c.strong, want);
    EXPECT_EQ(std::count(c.strong.begin(), c.strong.end(), "6_1"), 0);
    EXPECT_EQ(std::count(c.strong.begin(), c.strong.end(), "8_3"), 0);
    for (const auto& e : c.entries)
        if (e.verdict.strong()) {
            EXPECT_TRUE(replay(e.verdict)) << e.row.name;
        }
    EXPECT_EQ(census(parse_knot_csv("bundled"), 5).strong, (std::vector<std::string>{"4_1", "5_2"}));
}

TEST(Census, StableUnderRowOrder) {
    const std::string text = io::read_file(data_file("knots8.csv"));
    std::vector<std::string> lines;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) lines.push_back(l);
    std::mt19937_64 rng(5);
    const auto reference = census(parse_knot_csv_text(text), 8);
    for (int round = 0; round < 5; ++round) {
        std::shuffle(lines.begin() + 1, lines.end(), rng);
        std::string shuffled;
        for (const auto& l : lines) shuffled += l + "\n";
        const auto c = census(parse_knot_csv_text(shuffled), 8);
        EXPECT_EQ(c.strong, reference.strong);
        ASSERT_EQ(c.entries.size(), reference.entries.size());
        for (std::size_t i = 0; i < c.entries.size(); ++i) EXPECT_EQ(c.entries[i].row.name, reference.entries[i].row.name);
    }
}
