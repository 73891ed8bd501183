#ifndef LGE_TOOLS_CLI_HPP
#define LGE_TOOLS_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace lge::cli {

enum ExitCode : int { kOk = 0, kValidationFailure = 1, kUsageError = 2 };

/// Runs one command line (args excludes the program name) and returns the
/// process exit status.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// "5dB" -> 10^0.5, "3.162" -> 3.162. Throws std::invalid_argument.
double parse_snr(const std::string& text);

struct GridSpec {
  double start = 0.0;
  double stop = 0.0;
  int count = 0;
  bool log_spacing = false;

  std::vector<double> values() const;
};

/// "start:stop:count[:linear|log]". Throws std::invalid_argument.
GridSpec parse_grid(const std::string& text);

/// 17 significant digits; integral values keep a trailing ".0".
std::string format_number(double v);

}  // namespace lge::cli

#endif  // LGE_TOOLS_CLI_HPP
