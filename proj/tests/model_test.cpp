#include <gtest/gtest.h>

#include "alo/json_io.hpp"
#include "alo/model.hpp"
#include "fixtures.hpp"

using namespace alo;
using namespace alo::testing;

namespace {

template <typename F>
ErrorCode code_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code;
  }
  ADD_FAILURE() << "no exception thrown";
  return ErrorCode::PreconditionFailed;
}

}  // namespace

TEST(NewAlo, CatWithOneSubObject) {
  ALO a = new_alo("cat",
                  {sub("body",
                       {skill("jump", Primitive::jump, {{"height", 1.0}}),
                        skill("meow", Primitive::emit, {{"event", std::string("meow")}})},
                       {}, {})},
                  ManagerObject{"idle", {"idle"}, {}, 0.0});
  EXPECT_EQ(a.sub_objects.size(), 1u);
  EXPECT_EQ(a.main_obj(), "cat");
  EXPECT_EQ(a.provenance, Provenance::authored);
  EXPECT_TRUE(a.steps.empty());
  EXPECT_TRUE(validate(a).ok());
}

TEST(NewAlo, EmptySubObjectListIsLegal) {
  ALO a = new_alo("x", {}, ManagerObject{"s0", {"s0"}, {}, 0.0});
  EXPECT_TRUE(a.sub_objects.empty());
  EXPECT_TRUE(validate(a).ok());
}

TEST(NewAlo, RejectsDuplicateSubObjects) {
  auto a = sub("a", {}, {}, {});
  EXPECT_EQ(code_of([&] { new_alo("cat", {a, a}, ManagerObject{"s", {"s"}, {}, 0.0}); }),
            ErrorCode::DuplicateSubObject);
}

TEST(NewAlo, RejectsEmptyAndMalformedNames) {
  ManagerObject m{"s", {"s"}, {}, 0.0};
  EXPECT_EQ(code_of([&] { new_alo("", {}, m); }), ErrorCode::EmptyName);
  EXPECT_EQ(code_of([&] { new_alo("two  spaces", {}, m); }), ErrorCode::InvalidName);
  EXPECT_EQ(code_of([&] { new_alo(" lead", {}, m); }), ErrorCode::InvalidName);
}

TEST(NewAlo, RejectsDanglingPolicyTarget) {
  ManagerObject m{"s", {"s"}, {{always(), "fly", std::nullopt}}, 0.0};
  EXPECT_EQ(code_of([&] { new_alo("cat", {sub("body", {}, {}, {})}, m); }),
            ErrorCode::DanglingSkillReference);
}

TEST(NewAlo, OtherViolationsThrowValidationFailed) {
  ManagerObject m{"s", {"s"}, {}, 0.0};
  try {
    new_alo("cat", {sub("body", {}, {}, {scalar("battery", 12, 0, 10)})}, m);
    FAIL();
  } catch (const ValidationFailed& e) {
    EXPECT_TRUE(e.report.has("DomainExceeded"));
  }
}

TEST(Validate, FixturesAreClean) {
  for (const ALO& a : {cat(), roomba(), cat_meets_roomba(), printer()})
    EXPECT_TRUE(validate(a).ok()) << a.name << ": " << validate(a).to_string();
}

TEST(Validate, ScalarOutsideDomain) {
  ALO a = roomba();
  std::get<ScalarState>(a.sub_objects[0].states.at("battery").value).value = 120;
  auto r = validate(a);
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_EQ(r.violations[0].code, "DomainExceeded");
  EXPECT_EQ(r.violations[0].path, "subObjList[0].states.battery");
}

TEST(Validate, ScalarDomainExample) {
  ALO a = new_alo("device", {sub("power", {}, {}, {scalar("battery", 5, 0, 10)})},
                  ManagerObject{"on", {"on"}, {}, 0.0});
  std::get<ScalarState>(a.sub_objects[0].states.at("battery").value).value = 12;
  auto r = validate(a);
  ASSERT_EQ(r.violations.size(), 1u);
  EXPECT_EQ(r.violations[0].code, "DomainExceeded");
  EXPECT_EQ(r.violations[0].path, "subObjList[0].states.battery");
}

TEST(Validate, UnknownManagerState) {
  ALO a = cat();
  a.manager.current_state = "sleep";
  auto r = validate(a);
  EXPECT_TRUE(r.has("UnknownManagerState"));
}

TEST(Validate, LabelOutsideDomainAndNonFiniteVector) {
  ALO a = cat();
  std::get<LabelState>(a.sub_objects[0].states.at("mood").value).value = "angry";
  a.sub_objects[0].states.emplace("pos", StateVariable{"pos", Vector3State{{1, NAN, 0}}});
  auto r = validate(a);
  EXPECT_TRUE(r.has("DomainExceeded"));
  EXPECT_TRUE(r.has("NonFiniteVector"));
}

TEST(Validate, SkillParameterRequirements) {
  ALO a = roomba();
  a.sub_objects[0].skills[2].parameters.erase("radius");
  EXPECT_TRUE(validate(a).has("MissingParameter"));
  a = roomba();
  a.sub_objects[0].skills[2].parameters["speed"] = 0.0;
  EXPECT_TRUE(validate(a).has("InvalidParameter"));
  a = roomba();
  a.sub_objects[0].skills.push_back(a.sub_objects[0].skills[0]);
  EXPECT_TRUE(validate(a).has("DuplicateSkill"));
}

TEST(Validate, PolicyConditionsAreTypeChecked) {
  ALO a = cat();
  a.manager.policy[1].condition.value = true;  // body.energy is scalar
  EXPECT_TRUE(validate(a).has("TypeMismatch"));
  a = cat();
  a.manager.policy[1].condition.subject = "body.hunger";
  EXPECT_TRUE(validate(a).has("UnknownStateReference"));
  a = cat();
  a.manager.policy[1].next_state = "flying";
  EXPECT_FALSE(validate(a).ok());
}

TEST(Validate, StepLogDiscipline) {
  ALO a = cat();
  append_step(a, {0, 0, "cat#0", "chase", "hunting", ""});
  append_step(a, {0, 3, "cat#0", "meow", "hunting", "meow"});
  EXPECT_EQ(a.steps[1].index, 1);
  EXPECT_TRUE(validate(a).ok());
  EXPECT_EQ(code_of([&] { append_step(a, {0, 2, "cat#0", "chase", "hunting", ""}); }),
            ErrorCode::PreconditionFailed);
  a.steps[1].index = 5;
  EXPECT_TRUE(validate(a).has("StepIndexGap"));
  a.steps[1].index = 1;
  a.steps[1].tick = -1;
  EXPECT_TRUE(validate(a).has("TickDecreasing"));
}

TEST(Validate, ViolationsAreDataNotExceptions) {
  ALO a;
  EXPECT_NO_THROW({
    auto r = validate(a);
    EXPECT_TRUE(r.has("EmptyName"));
  });
}

TEST(SkillMaxSpeed, JumpUsesLaunchSpeed) {
  EXPECT_DOUBLE_EQ(skill_max_speed(skill("j", Primitive::jump, {{"height", 5.0}})), std::sqrt(2 * 9.8 * 5.0));
  EXPECT_DOUBLE_EQ(skill_max_speed(skill("m", Primitive::move, {{"speed", 3.0}})), 3.0);
  EXPECT_DOUBLE_EQ(skill_max_speed(skill("i", Primitive::idle)), 0.0);
}

TEST(Names, IdentifierAndAloNameRules) {
  EXPECT_TRUE(is_identifier("print-speed"));
  EXPECT_TRUE(is_identifier("_x1"));
  EXPECT_FALSE(is_identifier("1x"));
  EXPECT_FALSE(is_identifier("a b"));
  EXPECT_TRUE(is_alo_name("cat meets roomba"));
  EXPECT_TRUE(is_alo_name("3D physical world"));
  EXPECT_FALSE(is_alo_name("cat "));
  EXPECT_FALSE(is_alo_name("a\tb"));
}

TEST(StructuralEquality, IgnoresProvenanceOnly) {
  ALO a = cat();
  ALO b = a;
  b.provenance = Provenance::llm_generated;
  EXPECT_TRUE(structurally_equal(a, b));
  EXPECT_NE(a, b);
  b.sub_objects[0].knowledge.push_back("extra");
  EXPECT_FALSE(structurally_equal(a, b));
}

TEST(JsonIo, RoundTripsGeneratedAlos) {
  AloGenerator gen(7);
  for (int i = 0; i < 300; ++i) {
    ALO a = gen.next();
    ASSERT_TRUE(validate(a).ok()) << validate(a).to_string();
    ALO b = alo_from_json(nlohmann::json::parse(to_json(a).dump()));
    ASSERT_EQ(a, b) << to_json(a).dump(2);
  }
}

TEST(JsonIo, RejectsMalformedDocuments) {
  nlohmann::json j = to_json(cat());
  j["subObjList"][0]["states"]["energy"]["kind"] = "complex";
  EXPECT_EQ(code_of([&] { alo_from_json(j); }), ErrorCode::CorruptEntry);
  EXPECT_EQ(code_of([&] { alo_from_json(nlohmann::json::array()); }), ErrorCode::CorruptEntry);
}

TEST(GeneratorProperty, NewAloAcceptsEveryValidInput) {
  AloGenerator gen(99);
  for (int i = 0; i < 200; ++i) {
    ALO a = gen.next();
    ALO b = new_alo(a.name, a.sub_objects, a.manager);
    EXPECT_TRUE(validate(b).ok());
    EXPECT_TRUE(b.steps.empty());
  }
}
