#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ramanpcr/synth.hpp"

namespace ramanpcr {

/// Exit statuses of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitInternal = 1, kExitInput = 2, kExitNotSignificant = 3 };

/// `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv);

/// Recipe from the `synth.recipe` config section; `{"preset": "tears"}` or
/// a missing section gives the tears recipe.
SynthRecipe recipe_from_json(const std::string& text, std::uint64_t seed);

}  // namespace ramanpcr
