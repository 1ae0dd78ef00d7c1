// Schema validation uses RapidJSON's draft-04 validator, kept to this file.

#include <rapidjson/document.h>
#include <rapidjson/error/en.h>
#include <rapidjson/schema.h>
#include <rapidjson/stringbuffer.h>

#include "alo/codegen.hpp"

namespace alo::detail {
std::optional<std::string_view> embedded_resource(std::string_view path);
}

namespace alo::codegen {

namespace {

const rapidjson::SchemaDocument& compiled_schema() {
  static const rapidjson::SchemaDocument schema = [] {
    rapidjson::Document d;
    d.Parse(bundle_schema().c_str());
    if (d.HasParseError())
      throw Error(ErrorCode::IoFailure, std::string("bundle schema: ") + rapidjson::GetParseError_En(d.GetParseError()));
    return rapidjson::SchemaDocument(d);
  }();
  return schema;
}

}  // namespace

const std::string& bundle_schema() {
  static const std::string text = [] {
    auto r = detail::embedded_resource("schema/scene-bundle.schema.json");
    if (!r) throw Error(ErrorCode::IoFailure, "bundle schema resource missing");
    return std::string(*r);
  }();
  return text;
}

std::vector<std::string> schema_errors(const nlohmann::json& bundle) {
  rapidjson::Document doc;
  std::string text = bundle.dump();
  doc.Parse(text.c_str());
  if (doc.HasParseError()) return {std::string("unparseable: ") + rapidjson::GetParseError_En(doc.GetParseError())};
  rapidjson::SchemaValidator validator(compiled_schema());
  if (doc.Accept(validator)) return {};
  rapidjson::StringBuffer where, schema_where;
  validator.GetInvalidDocumentPointer().StringifyUriFragment(where);
  validator.GetInvalidSchemaPointer().StringifyUriFragment(schema_where);
  std::string at = where.GetString();
  if (!at.empty() && at[0] == '#') at.erase(0, 1);
  return {(at.empty() ? "/" : at) + ": violates " + validator.GetInvalidSchemaKeyword() + " (schema " +
          schema_where.GetString() + ")"};
}

}  // namespace alo::codegen
