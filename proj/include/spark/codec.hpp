#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "spark/model.hpp"

namespace spark {

enum class CodecErrc {
  bad_magic,
  version_mismatch,
  truncated,
  corrupt_header,
  center_off_grid,
  invalid_model,
};

class CodecError : public std::runtime_error {
 public:
  CodecError(CodecErrc errc, const std::string& what)
      : std::runtime_error(what), errc_(errc) {}
  CodecErrc errc() const { return errc_; }

 private:
  CodecErrc errc_;
};

inline constexpr int kCoeffBits = 16;
inline constexpr int kKernelParamBits = 12;
inline constexpr int kRawSampleBits = 16;  // reference cost of one grid sample
inline constexpr std::uint8_t kFormatVersion = 1;

/// Index bit width for a grid axis: ceil(log2(n)), 0 when n == 1.
int index_bits(Eigen::Index n);

struct BitBudgetRow {
  std::string component;
  long long count = 0;
  int bits_per_value = 0;
  long long total_bits = 0;
};

/// Payload accounting. continuous_bits covers base coefficients plus kernel
/// amplitudes/widths; center index bits are reported as a separate line so
/// both totals stay visible. raw_bits/ratio are filled when grid dimensions
/// are supplied.
struct BitBudget {
  std::vector<BitBudgetRow> rows;
  long long continuous_bits = 0;
  long long center_bits = 0;
  long long raw_bits = 0;
  double ratio_vs_raw = 0.0;
};

BitBudget bit_budget(PatternMode mode, int order, int k,
                     Eigen::Index n_theta = 0, Eigen::Index n_phi = 0);

/// Byte length of the serialized header for the given grid shape (the axes
/// travel in the header as 32-bit floats).
std::size_t header_byte_size(PatternMode mode, Eigen::Index n_theta, Eigen::Index n_phi);

/// Serializes a model into the versioned binary stream. Base coefficients
/// are mid-rise quantized to 16 bits over the per-model range declared in
/// the header; kernel amplitudes/widths to 12 bits over their fixed boxes;
/// centers as exact grid-axis indices. encode(decode(encode(m))) is
/// bit-identical to encode(m).
std::vector<std::uint8_t> encode(const SparkModel& model);

/// Parses and dequantizes a stream. Distinct errors for bad magic, version
/// mismatch and truncation. The decoded model carries the declared
/// coefficient range so a re-encode reproduces the stream.
SparkModel decode(const std::vector<std::uint8_t>& bytes);

}  // namespace spark
