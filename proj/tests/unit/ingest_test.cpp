#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "strictclust/ingest.hpp"
#include "worked_example.hpp"

namespace strictclust {
namespace {

namespace worked = testing::worked;

const Config kCfg{60, 10};

TEST(ParseCsvLine, WorkedExampleRow) {
    const auto p = parse_csv_line("10,15,20,25,30,35,40,45,50,55", kCfg);
    EXPECT_EQ(p.features, worked::kPoints[0]);
}

TEST(ParseCsvLine, WhitespaceLeadingZerosAndExponents) {
    const auto p = parse_csv_line(" 09 ,\t35,1.8e1,45,10,32,60,41,10,+20\r", kCfg);
    EXPECT_EQ(p.features, worked::kPoints[1]);
}

TEST(ParseCsvLine, Errors) {
    try {
        parse_csv_line("10, 15", kCfg);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
    }
    try {
        parse_csv_line("10,abc,20", kCfg, 0, 7);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.column(), 2u);
        EXPECT_EQ(e.line(), 7u);
    }
    try {
        parse_csv_line("1,,3", Config{60, 3});
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.column(), 2u);
    }
    try {
        parse_csv_line("1,-2,3", Config{60, 3});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NegativeFeature);
    }
    try {
        parse_csv_line("1,inf,3", Config{60, 3});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NonFiniteFeature);
    }
}

TEST(ParseJsonlLine, Examples) {
    const auto p = parse_jsonl_line(R"({"features":[9,35,18,45,10,32,60,41,10,20]})", kCfg);
    EXPECT_EQ(p.features, worked::kPoints[1]);
    EXPECT_FALSE(p.label.has_value());

    const auto labelled = parse_jsonl_line(R"({"id":"dp-1","features":[1.5,2]})", Config{60, 2});
    EXPECT_EQ(labelled.label, "dp-1");

    try {
        parse_jsonl_line(R"({"features":[]})", kCfg);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
    }
}

TEST(ParseJsonlLine, MalformedRecords) {
    for (const char* bad : {R"({"feat":[1]})", R"([1,2])", R"({"features":[1,"x"]})",
                            R"({"features":[1,true]})", R"({"features":1})",
                            R"({"features":[1],"id":3})", "{not json"}) {
        try {
            parse_jsonl_line(bad, Config{60, 1});
            ADD_FAILURE() << bad;
        } catch (const Error& e) {
            EXPECT_EQ(e.code(), ErrorCode::ParseError) << bad;
        }
    }
}

std::string worked_csv(bool header) {
    std::string s = header ? "f1,f2,f3,f4,f5,f6,f7,f8,f9,f10\n" : "";
    for (const auto& row : worked::kPoints) {
        s += format_csv_line(DataPoint{0, row, {}}) + "\r\n";
    }
    return s;
}

TEST(StreamPoints, WorkedExampleWithHeaderAndCrlf) {
    std::istringstream in(worked_csv(true));
    const auto r = stream_points(in, InputFormat::Csv, std::nullopt, ErrorPolicy::Halt);
    ASSERT_EQ(r.points.size(), 6u);
    for (std::size_t i = 0; i < 6; ++i) {
        EXPECT_EQ(r.points[i].seq, i);
        EXPECT_EQ(r.points[i].features, worked::kPoints[i]);
    }
    EXPECT_EQ(r.n_features, 10u);
    EXPECT_TRUE(r.diagnostics.empty());
}

TEST(StreamPoints, SkipPolicyReportsLineNumbers) {
    std::istringstream in("1,2\n\n3,x\n4,5\n6,7,8\n9,10\n");
    const auto r = stream_points(in, InputFormat::Csv, std::nullopt, ErrorPolicy::Skip);
    ASSERT_EQ(r.points.size(), 3u);
    EXPECT_EQ(r.points[2].features, (std::vector<double>{9, 10}));
    EXPECT_EQ(r.points[2].seq, 2u);
    ASSERT_EQ(r.diagnostics.size(), 2u);
    EXPECT_EQ(r.diagnostics[0].line_number, 3u);
    EXPECT_EQ(r.diagnostics[0].code, ErrorCode::ParseError);
    EXPECT_EQ(r.diagnostics[1].line_number, 5u);
    EXPECT_EQ(r.diagnostics[1].code, ErrorCode::DimensionMismatch);
}

TEST(StreamPoints, OneMalformedMiddleLineOfSix) {
    std::string text = worked_csv(false);
    text.replace(text.find("18,13"), 2, "1a");
    std::istringstream in(text);
    const auto r = stream_points(in, InputFormat::Csv, 10, ErrorPolicy::Skip);
    EXPECT_EQ(r.points.size(), 5u);
    ASSERT_EQ(r.diagnostics.size(), 1u);
    EXPECT_EQ(r.diagnostics[0].line_number, 3u);
}

TEST(StreamPoints, HaltPolicyThrowsWithLineNumber) {
    std::istringstream in("1,2\n3,4\n5,-6\n");
    try {
        stream_points(in, InputFormat::Csv, std::nullopt, ErrorPolicy::Halt);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::NegativeFeature);
        EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
    }
}

TEST(StreamPoints, EmptyInput) {
    std::istringstream in("");
    const auto r = stream_points(in, InputFormat::Csv, std::nullopt, ErrorPolicy::Halt);
    EXPECT_TRUE(r.points.empty());
    EXPECT_FALSE(r.n_features.has_value());
}

TEST(StreamPoints, JsonlWithFirstSeqOffset) {
    std::istringstream in("{\"features\":[1,2]}\n\n{\"features\":[3,4],\"id\":\"b\"}\n");
    const auto r = stream_points(in, InputFormat::Jsonl, 2, ErrorPolicy::Halt, 40);
    ASSERT_EQ(r.points.size(), 2u);
    EXPECT_EQ(r.points[0].seq, 40u);
    EXPECT_EQ(r.points[1].seq, 41u);
    EXPECT_EQ(r.points[1].label, "b");
}

TEST(StreamPoints, HeaderOnlyConsideredOnFirstLine) {
    std::istringstream in("1,2\nx,y\n");
    const auto r = stream_points(in, InputFormat::Csv, std::nullopt, ErrorPolicy::Skip);
    EXPECT_EQ(r.points.size(), 1u);
    EXPECT_EQ(r.diagnostics.size(), 1u);
}

TEST(FormatCsvLine, RoundTripsRandomValues) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> mag(-12.0, 12.0);
    for (int i = 0; i < 500; ++i) {
        std::vector<double> f(1 + i % 9);
        for (double& v : f) v = std::pow(10.0, mag(rng)) * (i % 3 == 0 ? 1.0 : 3.0);
        const DataPoint p{0, f, {}};
        EXPECT_EQ(parse_csv_line(format_csv_line(p), Config{60, f.size()}).features, f);
    }
}

}  // namespace
}  // namespace strictclust
