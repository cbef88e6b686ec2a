#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "polyarena/environment.hpp"

namespace polyarena {

inline constexpr int kRecipeSchemaVersion = 1;

/// A validated recipe document: one file describing one complete task.
struct Recipe {
  std::string name;
  nlohmann::json document;
};

/// Which sprites a scripted policy should steer, and toward what.
struct PolicyHint {
  std::string agent;
  std::string target;
};

/// Validates by building every component once. Throws SchemaError with a JSON
/// pointer to the offending node, or UnknownComponentName.
Recipe parse_recipe(const nlohmann::json& document);
Recipe parse_recipe_text(std::string_view text);

/// A builtin name or a path to a recipe file. Throws UnknownBuiltin when the
/// argument is neither, IoError when the file cannot be read.
Recipe load_recipe(std::string_view name_or_path);

/// Canonical text: sorted keys, two-space indent, trailing newline.
std::string serialize(const Recipe& recipe);
std::uint64_t recipe_hash(const Recipe& recipe);

EnvironmentConfig build_config(const Recipe& recipe, std::optional<std::uint64_t> seed = std::nullopt);
Environment build(const Recipe& recipe, std::optional<std::uint64_t> seed = std::nullopt);

std::optional<PolicyHint> policy_hint(const Recipe& recipe);

/// navigate_to_goal, pong, red_green, pacman, collisions.
const std::vector<std::string>& builtin_names();
/// Throws UnknownBuiltin.
Recipe builtin(std::string_view name);

}  // namespace polyarena
