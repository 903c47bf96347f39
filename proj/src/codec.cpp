#include "spark/codec.hpp"

#include <cmath>
#include <cstring>
#include <limits>

#include "spark/angles.hpp"

namespace spark {

namespace {

constexpr char kMagic[4] = {'S', 'P', 'R', 'K'};
constexpr int kModeSphere = 0;
constexpr int kModeCut = 1;

// Sanity ceilings for header fields; anything beyond these is a corrupt or
// hostile stream, not a real model.
constexpr int kMaxOrder = 64;
constexpr int kMaxKernels = 4096;
constexpr Eigen::Index kMaxAxisLen = 1 << 20;

// ---- byte-level header I/O (little-endian) --------------------------------

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v & 0xFF));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_f32(std::vector<std::uint8_t>& out, float v) {
  std::uint32_t bits;
  std::memcpy(&bits, &v, sizeof(bits));
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
}

class ByteReader {
 public:
  explicit ByteReader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

  std::uint8_t u8() {
    need(1);
    return bytes_[pos_++];
  }
  std::uint16_t u16() {
    need(2);
    std::uint16_t v = static_cast<std::uint16_t>(bytes_[pos_] | (bytes_[pos_ + 1] << 8));
    pos_ += 2;
    return v;
  }
  float f32() {
    need(4);
    std::uint32_t bits = 0;
    for (int i = 0; i < 4; ++i) bits |= static_cast<std::uint32_t>(bytes_[pos_ + i]) << (8 * i);
    pos_ += 4;
    float v;
    std::memcpy(&v, &bits, sizeof(v));
    return v;
  }
  std::size_t position() const { return pos_; }

 private:
  void need(std::size_t n) {
    if (pos_ + n > bytes_.size()) {
      throw CodecError(CodecErrc::truncated, "decode: stream truncated in header");
    }
  }
  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

// ---- payload bitstream, MSB-first within the payload -----------------------

class BitWriter {
 public:
  void write(std::uint32_t value, int bits) {
    for (int b = bits - 1; b >= 0; --b) {
      acc_ = static_cast<std::uint8_t>((acc_ << 1) | ((value >> b) & 1u));
      if (++filled_ == 8) {
        bytes_.push_back(acc_);
        acc_ = 0;
        filled_ = 0;
      }
    }
  }
  std::vector<std::uint8_t> finish() {
    if (filled_ > 0) {
      bytes_.push_back(static_cast<std::uint8_t>(acc_ << (8 - filled_)));
      acc_ = 0;
      filled_ = 0;
    }
    return std::move(bytes_);
  }

 private:
  std::vector<std::uint8_t> bytes_;
  std::uint8_t acc_ = 0;
  int filled_ = 0;
};

class BitReader {
 public:
  BitReader(const std::vector<std::uint8_t>& bytes, std::size_t byte_offset)
      : bytes_(bytes), bit_(byte_offset * 8) {}

  std::uint32_t read(int bits) {
    std::uint32_t v = 0;
    for (int b = 0; b < bits; ++b) {
      const std::size_t byte = bit_ / 8;
      if (byte >= bytes_.size()) {
        throw CodecError(CodecErrc::truncated, "decode: stream truncated in payload");
      }
      v = (v << 1) | ((bytes_[byte] >> (7 - bit_ % 8)) & 1u);
      ++bit_;
    }
    return v;
  }

 private:
  const std::vector<std::uint8_t>& bytes_;
  std::size_t bit_;
};

// ---- mid-rise uniform quantizer --------------------------------------------
// 2^bits cells over [lo, hi]; reconstruction at cell centers, so the error is
// at most (hi - lo) / 2^(bits+1), and re-quantizing a reconstructed value
// returns the same code.

std::uint32_t quantize(double v, double lo, double hi, int bits) {
  if (hi <= lo) return 0;
  const double cells = static_cast<double>(1u << bits);
  double q = std::floor((v - lo) / (hi - lo) * cells);
  if (q < 0.0) q = 0.0;
  if (q > cells - 1.0) q = cells - 1.0;
  return static_cast<std::uint32_t>(q);
}

double dequantize(std::uint32_t q, double lo, double hi, int bits) {
  if (hi <= lo) return lo;
  const double cells = static_cast<double>(1u << bits);
  return lo + (static_cast<double>(q) + 0.5) * (hi - lo) / cells;
}

// Conservative float32 bracket of [min, max] so every coefficient lies
// strictly inside the declared range and the range survives a f32 round trip.
float f32_below(double x) {
  float f = static_cast<float>(x);
  while (static_cast<double>(f) >= x) f = std::nextafterf(f, -std::numeric_limits<float>::infinity());
  return f;
}

float f32_above(double x) {
  float f = static_cast<float>(x);
  while (static_cast<double>(f) <= x) f = std::nextafterf(f, std::numeric_limits<float>::infinity());
  return f;
}

// Axis values travel as f32. Nearest rounding can push a boundary value just
// outside the valid angle range, so nudge back inside; strict monotonicity
// must survive the narrowing or the grid is too fine for the format.
std::vector<float> f32_axis(const Eigen::Ref<const Eigen::ArrayXd>& axis, double lo,
                            double hi, bool hi_inclusive, bool bounded) {
  std::vector<float> out(static_cast<std::size_t>(axis.size()));
  for (Eigen::Index i = 0; i < axis.size(); ++i) {
    float f = static_cast<float>(axis[i]);
    if (bounded) {
      while (static_cast<double>(f) < lo)
        f = std::nextafterf(f, std::numeric_limits<float>::infinity());
      while (static_cast<double>(f) > hi ||
             (!hi_inclusive && static_cast<double>(f) == hi))
        f = std::nextafterf(f, -std::numeric_limits<float>::infinity());
    }
    out[static_cast<std::size_t>(i)] = f;
  }
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (!(out[i] > out[i - 1])) {
      throw CodecError(CodecErrc::invalid_model,
                       "encode: axis spacing below float32 resolution");
    }
  }
  return out;
}

Eigen::Index nearest_index(const Eigen::ArrayXd& axis, double value) {
  Eigen::Index best = 0;
  double best_err = std::abs(axis[0] - value);
  for (Eigen::Index i = 1; i < axis.size(); ++i) {
    const double err = std::abs(axis[i] - value);
    if (err < best_err) {
      best = i;
      best_err = err;
    }
  }
  if (best_err > 1e-9) {
    throw CodecError(CodecErrc::center_off_grid,
                     "encode: kernel center is not a point of the declared grid");
  }
  return best;
}

}  // namespace

int index_bits(Eigen::Index n) {
  int bits = 0;
  while ((Eigen::Index{1} << bits) < n) ++bits;
  return bits;
}

BitBudget bit_budget(PatternMode mode, int order, int k, Eigen::Index n_theta,
                     Eigen::Index n_phi) {
  if (order < 0 || k < 0) {
    throw std::invalid_argument("bit_budget: negative order or kernel count");
  }
  BitBudget budget;
  const bool sphere = mode == PatternMode::Sphere3D;
  const long long n_coeff = sphere ? static_cast<long long>(order + 1) * (order + 1)
                                   : 2LL * order + 1;
  const long long kernel_params = sphere ? 3LL * k : 2LL * k;

  budget.rows.push_back(BitBudgetRow{sphere ? "sh_coefficients" : "fourier_coefficients",
                                     n_coeff, kCoeffBits, n_coeff * kCoeffBits});
  budget.rows.push_back(BitBudgetRow{"gaussian_params", kernel_params, kKernelParamBits,
                                     kernel_params * kKernelParamBits});
  budget.continuous_bits = budget.rows[0].total_bits + budget.rows[1].total_bits;

  if (n_theta > 0) {
    const int per_center =
        sphere ? index_bits(n_theta) + index_bits(n_phi) : index_bits(n_theta);
    budget.center_bits = static_cast<long long>(k) * per_center;
    budget.rows.push_back(
        BitBudgetRow{"center_indices", k, per_center, budget.center_bits});
    const long long samples = sphere ? static_cast<long long>(n_theta) * n_phi
                                     : static_cast<long long>(n_theta);
    budget.raw_bits = samples * kRawSampleBits;
    if (budget.continuous_bits > 0) {
      budget.ratio_vs_raw = static_cast<double>(budget.raw_bits) /
                            static_cast<double>(budget.continuous_bits);
    }
  }
  return budget;
}

std::size_t header_byte_size(PatternMode mode, Eigen::Index n_theta, Eigen::Index n_phi) {
  const Eigen::Index axis_values =
      mode == PatternMode::Sphere3D ? n_theta + n_phi : n_theta;
  return 4 + 1 + 1 + 2 + 2 + 2 + 2 + 4 * 4 + 4 * static_cast<std::size_t>(axis_values);
}

std::vector<std::uint8_t> encode(const SparkModel& model) {
  validate_model(model);
  const bool sphere = model.mode == PatternMode::Sphere3D;
  const int k = model.kernel_count();
  const Eigen::Index nt = sphere ? model.grid.n_theta() : model.axis.size();
  const Eigen::Index np = sphere ? model.grid.n_phi() : 0;

  if (nt > std::numeric_limits<std::uint16_t>::max() ||
      np > std::numeric_limits<std::uint16_t>::max() ||
      k > std::numeric_limits<std::uint16_t>::max()) {
    throw CodecError(CodecErrc::invalid_model, "encode: dimensions exceed format limits");
  }

  // Coefficient quantization range: reuse a declared range (decoded models
  // carry one) or bracket the coefficient extremes conservatively in f32.
  float coeff_lo;
  float coeff_hi;
  if (model.coeff_range) {
    coeff_lo = static_cast<float>(model.coeff_range->lo);
    coeff_hi = static_cast<float>(model.coeff_range->hi);
  } else {
    coeff_lo = f32_below(model.base_coeffs.minCoeff());
    coeff_hi = f32_above(model.base_coeffs.maxCoeff());
  }

  std::vector<std::uint8_t> out;
  out.reserve(header_byte_size(model.mode, nt, np) + 256);
  out.insert(out.end(), kMagic, kMagic + 4);
  out.push_back(kFormatVersion);
  out.push_back(static_cast<std::uint8_t>(sphere ? kModeSphere : kModeCut));
  put_u16(out, static_cast<std::uint16_t>(sphere ? model.l_max : model.n_harmonics));
  put_u16(out, static_cast<std::uint16_t>(k));
  put_u16(out, static_cast<std::uint16_t>(nt));
  put_u16(out, static_cast<std::uint16_t>(np));
  put_f32(out, coeff_lo);
  put_f32(out, coeff_hi);
  put_f32(out, static_cast<float>(model.calibration.lin_min));
  put_f32(out, static_cast<float>(model.calibration.lin_max));
  if (sphere) {
    for (float v : f32_axis(model.grid.theta(), 0.0, kPi, true, true)) put_f32(out, v);
    for (float v : f32_axis(model.grid.phi(), 0.0, kTwoPi, false, true)) put_f32(out, v);
  } else {
    for (float v : f32_axis(model.axis, 0.0, 0.0, true, false)) put_f32(out, v);
  }

  BitWriter payload;
  const double lo = coeff_lo;
  const double hi = coeff_hi;
  for (Eigen::Index c = 0; c < model.base_coeffs.size(); ++c) {
    payload.write(quantize(model.base_coeffs[c], lo, hi, kCoeffBits), kCoeffBits);
  }
  if (sphere) {
    const int tbits = index_bits(nt);
    const int pbits = index_bits(np);
    for (const GaussianKernel2D& kern : model.kernels2d) {
      payload.write(quantize(kern.amplitude, kAmplitudeMin, kAmplitudeMax, kKernelParamBits),
                    kKernelParamBits);
      payload.write(quantize(kern.sigma_theta, kWidthMin, kWidthMax, kKernelParamBits),
                    kKernelParamBits);
      payload.write(quantize(kern.sigma_phi, kWidthMin, kWidthMax, kKernelParamBits),
                    kKernelParamBits);
      payload.write(static_cast<std::uint32_t>(nearest_index(model.grid.theta(), kern.theta_c)),
                    tbits);
      payload.write(static_cast<std::uint32_t>(nearest_index(model.grid.phi(), kern.phi_c)),
                    pbits);
    }
  } else {
    const int abits = index_bits(nt);
    for (const GaussianKernel1D& kern : model.kernels1d) {
      payload.write(quantize(kern.amplitude, kAmplitudeMin, kAmplitudeMax, kKernelParamBits),
                    kKernelParamBits);
      payload.write(quantize(kern.sigma, kWidthMin, kWidthMax, kKernelParamBits),
                    kKernelParamBits);
      payload.write(static_cast<std::uint32_t>(nearest_index(model.axis, kern.center)), abits);
    }
  }
  const std::vector<std::uint8_t> bits = payload.finish();
  out.insert(out.end(), bits.begin(), bits.end());
  return out;
}

SparkModel decode(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kMagic, 4) != 0) {
    throw CodecError(CodecErrc::bad_magic, "decode: bad magic, not a spark model stream");
  }
  ByteReader reader(bytes);
  reader.u8();  // 'S'
  reader.u8();
  reader.u8();
  reader.u8();
  const std::uint8_t version = reader.u8();
  if (version != kFormatVersion) {
    throw CodecError(CodecErrc::version_mismatch,
                     "decode: unsupported format version " + std::to_string(version));
  }
  const std::uint8_t mode_byte = reader.u8();
  if (mode_byte != kModeSphere && mode_byte != kModeCut) {
    throw CodecError(CodecErrc::corrupt_header, "decode: unknown mode byte");
  }
  const bool sphere = mode_byte == kModeSphere;

  const int order = reader.u16();
  const int k = reader.u16();
  const Eigen::Index nt = reader.u16();
  const Eigen::Index np = reader.u16();
  if (order > kMaxOrder || k > kMaxKernels || nt > kMaxAxisLen || np > kMaxAxisLen) {
    throw CodecError(CodecErrc::corrupt_header, "decode: implausible header dimensions");
  }
  if (nt < 1 || (sphere && np < 1) || (!sphere && np != 0)) {
    throw CodecError(CodecErrc::corrupt_header, "decode: bad grid dimensions");
  }

  const double coeff_lo = reader.f32();
  const double coeff_hi = reader.f32();
  Calibration cal;
  cal.lin_min = reader.f32();
  cal.lin_max = reader.f32();

  Eigen::ArrayXd theta(nt);
  for (Eigen::Index i = 0; i < nt; ++i) theta[i] = reader.f32();
  Eigen::ArrayXd phi(np);
  for (Eigen::Index j = 0; j < np; ++j) phi[j] = reader.f32();

  SparkModel model;
  model.mode = sphere ? PatternMode::Sphere3D : PatternMode::Cut1D;
  model.calibration = cal;
  model.coeff_range = CoeffRange{coeff_lo, coeff_hi};
  try {
    if (sphere) {
      model.l_max = order;
      model.grid = AngularGrid(theta, phi);
    } else {
      model.n_harmonics = order;
      validate_axis(theta);
      model.axis = theta;
    }
  } catch (const std::invalid_argument& e) {
    throw CodecError(CodecErrc::corrupt_header, std::string("decode: bad axis: ") + e.what());
  }

  const int n_coeff = sphere ? (order + 1) * (order + 1) : 2 * order + 1;
  BitReader payload(bytes, reader.position());
  model.base_coeffs.resize(n_coeff);
  for (int c = 0; c < n_coeff; ++c) {
    model.base_coeffs[c] = dequantize(payload.read(kCoeffBits), coeff_lo, coeff_hi, kCoeffBits);
  }
  if (sphere) {
    const int tbits = index_bits(nt);
    const int pbits = index_bits(np);
    model.kernels2d.reserve(static_cast<std::size_t>(k));
    for (int c = 0; c < k; ++c) {
      GaussianKernel2D kern;
      kern.amplitude = dequantize(payload.read(kKernelParamBits), kAmplitudeMin,
                                  kAmplitudeMax, kKernelParamBits);
      kern.sigma_theta = dequantize(payload.read(kKernelParamBits), kWidthMin, kWidthMax,
                                    kKernelParamBits);
      kern.sigma_phi = dequantize(payload.read(kKernelParamBits), kWidthMin, kWidthMax,
                                  kKernelParamBits);
      const std::uint32_t ti = payload.read(tbits);
      const std::uint32_t pi = payload.read(pbits);
      if (ti >= static_cast<std::uint32_t>(nt) || pi >= static_cast<std::uint32_t>(np)) {
        throw CodecError(CodecErrc::corrupt_header, "decode: center index out of range");
      }
      kern.theta_c = model.grid.theta(ti);
      kern.phi_c = model.grid.phi(pi);
      model.kernels2d.push_back(kern);
    }
  } else {
    const int abits = index_bits(nt);
    model.kernels1d.reserve(static_cast<std::size_t>(k));
    for (int c = 0; c < k; ++c) {
      GaussianKernel1D kern;
      kern.amplitude = dequantize(payload.read(kKernelParamBits), kAmplitudeMin,
                                  kAmplitudeMax, kKernelParamBits);
      kern.sigma = dequantize(payload.read(kKernelParamBits), kWidthMin, kWidthMax,
                              kKernelParamBits);
      const std::uint32_t ai = payload.read(abits);
      if (ai >= static_cast<std::uint32_t>(nt)) {
        throw CodecError(CodecErrc::corrupt_header, "decode: center index out of range");
      }
      kern.center = model.axis[ai];
      model.kernels1d.push_back(kern);
    }
  }
  return model;
}

}  // namespace spark
