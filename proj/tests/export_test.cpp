#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "supersix/export.hpp"

using namespace supersix;

namespace {

const ValueTable& optimal7() {
  static const ValueTable table = solve_optimal(7, Method::Policy).table;
  return table;
}

}  // namespace

TEST(Csv, HeaderOrderingAndRoundTrip) {
  const std::string csv = table_csv(optimal7());
  std::istringstream in{csv};
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "total,lid,mover,opponent,numerator,denominator,decimal");
  std::getline(in, line);
  EXPECT_EQ(line, "2,0,1,1,1,1,1.000");

  const auto rows = parse_table_csv(csv);
  std::size_t expected = 0;
  for (int t = 2; t <= 7; ++t) expected += state_count(t);
  ASSERT_EQ(rows.size(), expected);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& a = rows[i - 1].state;
    const auto& b = rows[i].state;
    EXPECT_LT(std::make_tuple(a.total(), a.lid, a.mover), std::make_tuple(b.total(), b.lid, b.mover));
  }
  for (const CsvRow& r : rows) EXPECT_EQ(r.value, optimal7().value(r.state));
}

TEST(Csv, RejectsBadInput) {
  EXPECT_THROW(parse_table_csv("nope\n"), InvalidArgument);
  EXPECT_THROW(parse_table_csv(std::string{kTableCsvHeader} + "\n4,0,2,2,36,41\n"), InvalidArgument);
  EXPECT_THROW(parse_table_csv(std::string{kTableCsvHeader} + "\n5,0,2,2,36,41,0.878\n"), InvalidArgument);
}

TEST(Csv, LevelSlice) {
  const std::string csv = table_csv(optimal7(), 4, 4);
  EXPECT_NE(csv.find("4,0,2,2,36,41,0.878\n"), std::string::npos);
  EXPECT_NE(csv.find("4,1,1,2,35,41,0.854\n"), std::string::npos);
  EXPECT_NE(csv.find("4,2,1,1,88,123,0.715\n"), std::string::npos);
  EXPECT_EQ(csv.find("\n5,"), std::string::npos);
}

TEST(Json, LevelEntries) {
  const Json level = level_json(optimal7(), 6);
  ASSERT_EQ(level.size(), 15U);
  int flagged = 0;
  for (const Json& row : level) flagged += row.at("decision").get<bool>() ? 1 : 0;
  EXPECT_EQ(flagged, 9);
  EXPECT_EQ(level.front().at("lid"), 0);
  EXPECT_EQ(level.back().at("lid"), 4);
  EXPECT_EQ(level.back().at("decimal"), "0.524");

  const Json two = level_json(optimal7(), 2);
  ASSERT_EQ(two.size(), 1U);
  EXPECT_EQ(two[0].at("numerator"), "1");
  EXPECT_EQ(two[0].at("decision"), false);
}

TEST(Json, TableRoundTrip) {
  const Json doc = table_json(optimal7());
  const ValueTable back = parse_table_json_text(doc.dump());
  ASSERT_EQ(back.max_total(), 7);
  for (int t = 2; t <= 7; ++t) EXPECT_EQ(back.level(t), optimal7().level(t));
  EXPECT_EQ(back.strategies(), optimal7().strategies());
  EXPECT_EQ(doc.at("strategies").back().at("strategy"), "1111/1111/111/00/0");
}

TEST(Json, RejectsIncompleteTables) {
  Json doc = table_json(optimal7());
  doc["states"].erase(doc["states"].begin() + 3);
  EXPECT_THROW(parse_table_json(doc), InvalidArgument);
  EXPECT_THROW(parse_table_json_text("{"), InvalidArgument);
  Json dup = table_json(optimal7());
  dup["states"].push_back(dup["states"][0]);
  EXPECT_THROW(parse_table_json(dup), InvalidArgument);
}

TEST(GapCsv, Columns) {
  const std::vector<GapRecord> recs{{13, {3, 5, 5}, make_rational(-3, 40000)}};
  EXPECT_EQ(gap_csv(recs), "total,k,l,gap_numerator,gap_denominator,gap_decimal\n13,5,5,-3,40000,-0.0000750000\n");
}

TEST(Pyramid, FiveSticks) {
  const std::string p = text_pyramid(optimal7(), 5);
  EXPECT_NE(p.find("0.882"), std::string::npos);
  EXPECT_NE(p.find("0.613"), std::string::npos);
  EXPECT_NE(p.find("(0.453)"), std::string::npos);
  // The top row is the fullest lid.
  std::istringstream in{p};
  std::string title, top, labels;
  std::getline(in, title);
  std::getline(in, top);
  std::getline(in, labels);
  EXPECT_EQ(title, "total 5");
  EXPECT_NE(top.find("0.613"), std::string::npos);
  EXPECT_EQ(labels.front(), '3');
  EXPECT_NE(labels.find("1 1"), std::string::npos);
}

TEST(Pyramid, TwoSticks) {
  const std::string p = text_pyramid(optimal7(), 2);
  EXPECT_NE(p.find("1.000"), std::string::npos);
  EXPECT_EQ(std::count(p.begin(), p.end(), '.'), 1);
}
