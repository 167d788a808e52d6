/*
   Copyright 2026 The opspectra Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#ifndef OPSPECTRA_TOOLS_CLI_HPP
#define OPSPECTRA_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace opspectra::cli {

/// Exit statuses of the command-line tool.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kRefused = 2;

/// Runs one invocation; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace opspectra::cli

#endif  // OPSPECTRA_TOOLS_CLI_HPP
