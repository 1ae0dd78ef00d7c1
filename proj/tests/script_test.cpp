#include <gtest/gtest.h>

#include <algorithm>
#include <cstring>
#include <fstream>
#include <sstream>

#include "alo/script.hpp"
#include "fixtures.hpp"

using namespace alo;
using namespace alo::testing;
using script::RepairRule;

namespace {

std::string read_testdata(const std::string& name) {
  std::ifstream in(std::string(ALO_TESTDATA_DIR) + "/" + name, std::ios::binary);
  EXPECT_TRUE(in) << name;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}


}  // namespace

// ---------------------------------------------------------------------------
// serialize / parse

TEST(Serialize, CatDocumentMatchesGolden) {
  EXPECT_EQ(script::serialize(cat()), read_testdata("cat.alo.md"));
}

TEST(Serialize, EmptySubObjectListKeepsSection) {
  ALO a = new_alo("x", {}, ManagerObject{"s0", {"s0"}, {}, 0.0});
  std::string doc = script::serialize(a);
  EXPECT_NE(doc.find("## subObjList\n"), std::string::npos);
  EXPECT_TRUE(structurally_equal(script::parse_alo_markdown(doc), a));
}

TEST(Serialize, IsByteStable) {
  AloGenerator gen(3);
  for (int i = 0; i < 50; ++i) {
    ALO a = gen.next();
    EXPECT_EQ(script::serialize(a), script::serialize(a));
  }
}

TEST(Parse, CanonicalCatDocument) {
  ALO a = script::parse_alo_markdown(read_testdata("cat.alo.md"));
  EXPECT_EQ(a.provenance, Provenance::llm_generated);
  EXPECT_TRUE(structurally_equal(a, cat()));
  ASSERT_EQ(a.sub_objects.size(), 1u);
  EXPECT_EQ(a.sub_objects[0].skills[0].primitive, Primitive::jump);
  EXPECT_EQ(a.sub_objects[0].skills[1].primitive, Primitive::emit);
}

TEST(Parse, EmptyTextExpectsTitle) {
  try {
    script::parse_alo_markdown("");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line, 1u);
    EXPECT_EQ(e.expected, "# ALO:");
  }
}

TEST(Parse, DuplicateSubObjectHeadingFailsValidation) {
  std::string doc = read_testdata("cat.alo.md");
  std::string block = doc.substr(doc.find("### body"), doc.find("## managerObj") - doc.find("### body"));
  doc.insert(doc.find("## managerObj"), block);
  try {
    script::parse_alo_markdown(doc);
    FAIL();
  } catch (const ValidationFailed& e) {
    EXPECT_TRUE(e.report.has("DuplicateSubObject"));
  }
}

TEST(Parse, UnknownPrimitiveDegradesToIdle) {
  std::string doc = script::serialize(cat());
  std::string from = "pounce: jump(height=1.2)";
  doc.replace(doc.find(from), from.size(), "pounce: teleport(distance=3)");
  ALO a = script::parse_alo_markdown(doc);
  const SkillSpec* s = a.find_skill("pounce");
  ASSERT_NE(s, nullptr);
  EXPECT_EQ(s->primitive, Primitive::idle);
  EXPECT_EQ(s->note, "unknown primitive: teleport");
}

TEST(Parse, ReportsLineOfMalformedEntry) {
  std::string doc = script::serialize(cat());
  auto lines = lines_of(doc);
  auto it = std::find(lines.begin(), lines.end(), "  - energy: scalar in [0, 100] = 80 percent");
  ASSERT_NE(it, lines.end());
  *it = "  - energy: scalar in [0, 100 = 80 percent";
  try {
    script::parse_canonical(join(lines));
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line, static_cast<std::size_t>(it - lines.begin()) + 1);
  }
}

TEST(Parse, NumbersRoundTripExactly) {
  for (double v : {0.1, 1e-300, 1.7976931348623157e308, -0.0, 123456789.125, 5e-324, 2.0 / 3.0}) {
    std::string s = script::format_number(v);
    double back = std::strtod(s.c_str(), nullptr);
    EXPECT_EQ(std::memcmp(&v, &back, sizeof v) == 0 || v == back, true) << s;
  }
}

TEST(RoundTripProperty, GeneratedAlosSurviveSerializeParse) {
  AloGenerator gen(2024);
  for (int i = 0; i < 500; ++i) {
    ALO a = gen.next();
    std::string doc = script::serialize(a);
    ALO b = script::parse_alo_markdown(doc);
    ASSERT_TRUE(structurally_equal(a, b)) << doc;
    ASSERT_EQ(script::serialize(b), doc);
  }
}

TEST(RoundTripProperty, CanonicalDocumentsAreRepairFixedPoints) {
  AloGenerator gen(11);
  for (int i = 0; i < 200; ++i) {
    std::string doc = script::serialize(gen.next());
    auto r = script::repair(doc);
    ASSERT_EQ(r.text, doc);
    ASSERT_TRUE(r.applied.empty());
  }
}

// ---------------------------------------------------------------------------
// repair

TEST(Repair, CanonicalTextUnchanged) {
  std::string doc = read_testdata("cat.alo.md");
  auto r = script::repair(doc);
  EXPECT_EQ(r.text, doc);
  EXPECT_TRUE(r.applied.empty());
}

TEST(Repair, DuplicateSkillsKeyDropped) {
  auto r = script::repair(read_testdata("raw/duplicate_skills.md"));
  EXPECT_EQ(r.applied, std::vector<RepairRule>{RepairRule::R3});
  ALO a = script::parse_alo_markdown(r.text);
  EXPECT_EQ(a.sub_objects[0].skills.size(), 2u);
}

TEST(Repair, ChattyResponseIsCleaned) {
  std::string raw = read_testdata("raw/chatty_roomba.md");
  auto r = script::repair(raw);
  EXPECT_NE(std::find(r.applied.begin(), r.applied.end(), RepairRule::R5), r.applied.end());
  ALO a = script::parse_alo_markdown(raw);
  EXPECT_TRUE(structurally_equal(a, roomba())) << r.text;
}

TEST(Repair, ClosesUnterminatedFence) {
  std::string raw = "```markdown\n" + script::serialize(cat());
  auto r = script::repair(raw);
  EXPECT_NE(std::find(r.applied.begin(), r.applied.end(), RepairRule::R1), r.applied.end());
  EXPECT_TRUE(structurally_equal(script::parse_alo_markdown(raw), cat()));
}

TEST(Repair, DemotesDeepHeadingsAndCoercesBooleans) {
  std::string doc = script::serialize(cat());
  auto replace = [&](const std::string& from, const std::string& to) {
    doc.replace(doc.find(from), from.size(), to);
  };
  replace("## managerObj", "#### ManagerObj");
  replace("awake: boolean = yes", "awake: boolean = TRUE");
  auto r = script::repair(doc);
  EXPECT_EQ(r.applied, (std::vector<RepairRule>{RepairRule::R2, RepairRule::R4}));
  EXPECT_TRUE(structurally_equal(script::parse_alo_markdown(doc), cat()));
}

TEST(Repair, ShallowHeadingIsLeftForParser) {
  std::string doc = script::serialize(cat());
  doc.replace(doc.find("## managerObj"), 13, "# managerObj");
  EXPECT_THROW(script::parse_alo_markdown(doc), ParseError);
}

TEST(RepairProperty, IdempotentAndBoundedOnMutatedFixtures) {
  AloGenerator gen(5150);
  std::vector<ALO> bases = {cat(), roomba(), cat_meets_roomba(), printer()};
  for (int i = 0; i < 200; ++i) {
    ALO base = i < 4 ? bases[static_cast<std::size_t>(i)] : gen.next();
    std::string raw = mutate(script::serialize(base), gen);
    auto once = script::repair(raw);
    auto twice = script::repair(once.text);
    ASSERT_EQ(twice.text, once.text) << raw;
    ASSERT_TRUE(twice.applied.empty()) << raw;
    ASSERT_LE(once.text.size(), raw.size() + 4) << raw;
    bool r1 = std::find(once.applied.begin(), once.applied.end(), RepairRule::R1) != once.applied.end();
    if (!r1) ASSERT_LE(once.text.size(), raw.size());
    ASSERT_TRUE(std::is_sorted(once.applied.begin(), once.applied.end()));
  }
}

// ---------------------------------------------------------------------------
// code blocks

TEST(CodeBlocks, TwoBlocksInOrder) {
  std::string text = "intro\n```js\nconst a = 1;\n```\nmiddle\n```\nb\nc\n```\n";
  auto blocks = script::extract_code_blocks(text);
  ASSERT_EQ(blocks.size(), 2u);
  EXPECT_EQ(blocks[0].language, "js");
  EXPECT_EQ(blocks[0].body, "const a = 1;");
  EXPECT_EQ(blocks[1].body, "b\nc");
  EXPECT_LT(blocks[0].end, blocks[1].begin);
  EXPECT_FALSE(blocks[1].repaired);
}

TEST(CodeBlocks, NoFences) { EXPECT_TRUE(script::extract_code_blocks("just prose\n").empty()); }

TEST(CodeBlocks, UnterminatedFenceRunsToEnd) {
  auto blocks = script::extract_code_blocks(read_testdata("raw/unterminated_class.md"));
  ASSERT_EQ(blocks.size(), 1u);
  EXPECT_TRUE(blocks[0].repaired);
  EXPECT_NE(blocks[0].body.find("updateCatPerFrame"), std::string::npos);
}

TEST(CodeBlocks, SpansAreOrderedSubstrings) {
  AloGenerator g(1);
  for (int i = 0; i < 100; ++i) {
    std::string text;
    std::size_t parts = g.pick(6);
    for (std::size_t k = 0; k < parts; ++k) {
      text += g.fact() + "\n";
      if (g.pick(2)) text += "```" + g.ident() + "\n" + g.fact() + "\n" + (g.pick(4) ? "```\n" : "");
    }
    auto blocks = script::extract_code_blocks(text);
    std::size_t last_end = 0;
    for (const auto& b : blocks) {
      ASSERT_LE(b.begin, b.end);
      ASSERT_LE(b.end, text.size());
      ASSERT_GE(b.begin, last_end);
      ASSERT_EQ(text.substr(b.begin, b.end - b.begin), b.body);
      last_end = b.end;
    }
  }
}

// ---------------------------------------------------------------------------
// parameter tables

TEST(Tables, ThreeColumnsTwoRows) {
  auto t = script::parse_parameter_table(
      "Here you go:\n\n| a | b | c |\n|---|:-:|---|\n| 1 | 2 | 3 |\n| x | y \\| z | w |\n\nDone.");
  EXPECT_EQ(t.header, (std::vector<std::string>{"a", "b", "c"}));
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[1][1], "y | z");
}

TEST(Tables, RaggedRowReportsLine) {
  try {
    script::parse_parameter_table("| a | b |\n|---|---|\n| 1 | 2 |\n| 3 |\n");
    FAIL();
  } catch (const script::RaggedRowError& e) {
    EXPECT_EQ(e.code, ErrorCode::RaggedRow);
    EXPECT_EQ(e.line, 4u);
  }
}

TEST(Tables, ProseOnly) {
  try {
    script::parse_parameter_table("No table here, only | a stray pipe.");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code, ErrorCode::NoTableFound);
  }
}

TEST(Tables, SmartphoneTableBecomesDerivedAlo) {
  auto t = script::parse_parameter_table(read_testdata("raw/smartphone_table.md"));
  ALO a = script::alo_from_parameter_table("smartphone", t);
  EXPECT_EQ(a.provenance, Provenance::derived);
  EXPECT_TRUE(validate(a).ok()) << validate(a).to_string();
  const StateVariable* battery = a.find_state("battery", "capacity");
  ASSERT_NE(battery, nullptr);
  const auto& s = std::get<ScalarState>(battery->value);
  EXPECT_EQ(s.value, 4500);
  EXPECT_EQ(s.unit, "mAh");
  const StateVariable* nfc = a.find_state("connectivity", "nfc");
  ASSERT_NE(nfc, nullptr);
  EXPECT_TRUE(std::get<BooleanState>(nfc->value).value);
  EXPECT_TRUE(structurally_equal(script::parse_alo_markdown(script::serialize(a)), a));
}
