#pragma once

#include "cosparse/linops.hpp"
#include "cosparse/types.hpp"

#include <filesystem>
#include <fstream>
#include <string>

namespace cosparse {

// COSF1 dense-operator format: magic "COSF1", u32 LE rows, u32 LE cols,
// u8 field flag (0 real, 1 complex), then rows*cols little-endian float64
// row-major (complex interleaved re,im).
struct DenseOperatorFile {
  Field field = Field::Real;
  Matrix real;
  CMatrix complex;

  Index rows() const { return field == Field::Real ? real.rows() : complex.rows(); }
  Index cols() const { return field == Field::Real ? real.cols() : complex.cols(); }
};

void write_cosf1(const std::filesystem::path& path, const Matrix& a);
void write_cosf1(const std::filesystem::path& path, const CMatrix& a);
DenseOperatorFile read_cosf1(const std::filesystem::path& path);

// Masks as binary PBM (P4), set bit = sampled cell, DFT index layout.
void write_pbm(const std::filesystem::path& path, const SamplingMask& mask);
SamplingMask read_pbm(const std::filesystem::path& path);

// Images as binary PGM (P5), 8- or 16-bit, mapped linearly to [0,1].
// Writing always emits 16-bit samples (big-endian, per the format).
void write_pgm16(const std::filesystem::path& path, const Matrix& image);
Matrix read_pgm(const std::filesystem::path& path);

/// Writes to a sibling temp file and renames into place on commit, so
/// failed runs never leave partial output files behind.
class AtomicFileWriter {
 public:
  explicit AtomicFileWriter(std::filesystem::path target);
  ~AtomicFileWriter();
  AtomicFileWriter(const AtomicFileWriter&) = delete;
  AtomicFileWriter& operator=(const AtomicFileWriter&) = delete;

  void append(const void* data, std::size_t size);
  void append(const std::string& text) { append(text.data(), text.size()); }
  void commit();

 private:
  std::filesystem::path target_;
  std::filesystem::path temp_;
  std::ofstream stream_;
  bool committed_ = false;
};

}  // namespace cosparse
