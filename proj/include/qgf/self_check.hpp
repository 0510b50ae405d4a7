#pragma once
#include <functional>
#include <string>

namespace qgf {

// Fast invariant bundle for the `check` CLI command. Calls report once per
// check with its name and outcome; returns true when everything held.
bool run_self_checks(const std::function<void(const std::string&, bool)>& report);

}  // namespace qgf
