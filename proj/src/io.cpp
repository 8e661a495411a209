#include "cosparse/io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <vector>

namespace cosparse {

static_assert(std::endian::native == std::endian::little,
              "COSF1 serialization assumes a little-endian host");

namespace {

constexpr char kMagic[5] = {'C', 'O', 'S', 'F', '1'};

void append_u32(AtomicFileWriter& out, std::uint32_t v) { out.append(&v, 4); }
void append_f64(AtomicFileWriter& out, double v) { out.append(&v, 8); }

std::vector<char> slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failure on " + path.string());
  return bytes;
}

class ByteReader {
 public:
  ByteReader(std::vector<char> bytes, std::string name)
      : bytes_(std::move(bytes)), name_(std::move(name)) {}

  void read(void* dst, std::size_t n) {
    if (pos_ + n > bytes_.size()) throw IoError("truncated file " + name_);
    std::memcpy(dst, bytes_.data() + pos_, n);
    pos_ += n;
  }
  std::uint32_t u32() {
    std::uint32_t v;
    read(&v, 4);
    return v;
  }
  std::uint8_t u8() {
    std::uint8_t v;
    read(&v, 1);
    return v;
  }
  double f64() {
    double v;
    read(&v, 8);
    return v;
  }
  bool exhausted() const { return pos_ == bytes_.size(); }
  const std::string& name() const { return name_; }

 private:
  std::vector<char> bytes_;
  std::size_t pos_ = 0;
  std::string name_;
};

void write_cosf1_header(AtomicFileWriter& out, Index rows, Index cols,
                        std::uint8_t field_flag) {
  out.append(kMagic, 5);
  append_u32(out, static_cast<std::uint32_t>(rows));
  append_u32(out, static_cast<std::uint32_t>(cols));
  out.append(&field_flag, 1);
}

}  // namespace

void write_cosf1(const std::filesystem::path& path, const Matrix& a) {
  AtomicFileWriter out(path);
  write_cosf1_header(out, a.rows(), a.cols(), 0);
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) append_f64(out, a(i, j));
  out.commit();
}

void write_cosf1(const std::filesystem::path& path, const CMatrix& a) {
  AtomicFileWriter out(path);
  write_cosf1_header(out, a.rows(), a.cols(), 1);
  for (Index i = 0; i < a.rows(); ++i)
    for (Index j = 0; j < a.cols(); ++j) {
      append_f64(out, a(i, j).real());
      append_f64(out, a(i, j).imag());
    }
  out.commit();
}

DenseOperatorFile read_cosf1(const std::filesystem::path& path) {
  ByteReader in(slurp(path), path.string());
  char magic[5];
  in.read(magic, 5);
  if (std::memcmp(magic, kMagic, 5) != 0)
    throw IoError("not a COSF1 file: " + path.string());
  const Index rows = static_cast<Index>(in.u32());
  const Index cols = static_cast<Index>(in.u32());
  const std::uint8_t flag = in.u8();
  DenseOperatorFile file;
  if (flag == 0) {
    file.field = Field::Real;
    file.real.resize(rows, cols);
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j) file.real(i, j) = in.f64();
  } else if (flag == 1) {
    file.field = Field::Complex;
    file.complex.resize(rows, cols);
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j) {
        const double re = in.f64();
        const double im = in.f64();
        file.complex(i, j) = {re, im};
      }
  } else {
    throw IoError("bad field flag in " + path.string());
  }
  if (!in.exhausted()) throw IoError("trailing bytes in " + path.string());
  return file;
}

void write_pbm(const std::filesystem::path& path, const SamplingMask& mask) {
  AtomicFileWriter out(path);
  out.append("P4\n" + std::to_string(mask.width) + " " +
             std::to_string(mask.height) + "\n");
  const Index row_bytes = (mask.width + 7) / 8;
  std::vector<std::uint8_t> row(static_cast<std::size_t>(row_bytes));
  for (Index r = 0; r < mask.height; ++r) {
    std::fill(row.begin(), row.end(), 0);
    for (Index c = 0; c < mask.width; ++c)
      if (mask.at(r, c)) row[static_cast<std::size_t>(c / 8)] |= 0x80u >> (c % 8);
    out.append(row.data(), row.size());
  }
  out.commit();
}

namespace {

// Skips PNM whitespace and '#' comments, then parses a decimal token.
Index parse_pnm_int(ByteReader& in) {
  std::uint8_t c = in.u8();
  for (;;) {
    if (c == '#') {
      while (c != '\n') c = in.u8();
    } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      c = in.u8();
    } else {
      break;
    }
  }
  if (c < '0' || c > '9') throw IoError("malformed PNM header in " + in.name());
  Index value = 0;
  while (c >= '0' && c <= '9') {
    value = value * 10 + (c - '0');
    c = in.u8();
  }
  if (c != ' ' && c != '\t' && c != '\r' && c != '\n')
    throw IoError("malformed PNM header in " + in.name());
  return value;
}

}  // namespace

SamplingMask read_pbm(const std::filesystem::path& path) {
  ByteReader in(slurp(path), path.string());
  char magic[2];
  in.read(magic, 2);
  if (magic[0] != 'P' || magic[1] != '4')
    throw IoError("not a binary PBM file: " + path.string());
  const Index width = parse_pnm_int(in);
  const Index height = parse_pnm_int(in);
  SamplingMask mask = SamplingMask::empty(height, width);
  const Index row_bytes = (width + 7) / 8;
  std::vector<std::uint8_t> row(static_cast<std::size_t>(row_bytes));
  for (Index r = 0; r < height; ++r) {
    in.read(row.data(), row.size());
    for (Index c = 0; c < width; ++c)
      if (row[static_cast<std::size_t>(c / 8)] & (0x80u >> (c % 8)))
        mask.set(r, c, true);
  }
  return mask;
}

void write_pgm16(const std::filesystem::path& path, const Matrix& image) {
  AtomicFileWriter out(path);
  out.append("P5\n" + std::to_string(image.cols()) + " " +
             std::to_string(image.rows()) + "\n65535\n");
  std::vector<std::uint8_t> row(static_cast<std::size_t>(image.cols()) * 2);
  for (Index r = 0; r < image.rows(); ++r) {
    for (Index c = 0; c < image.cols(); ++c) {
      const double clipped = std::min(1.0, std::max(0.0, image(r, c)));
      const auto v = static_cast<std::uint16_t>(std::lround(clipped * 65535.0));
      row[static_cast<std::size_t>(c) * 2] = static_cast<std::uint8_t>(v >> 8);
      row[static_cast<std::size_t>(c) * 2 + 1] = static_cast<std::uint8_t>(v & 0xff);
    }
    out.append(row.data(), row.size());
  }
  out.commit();
}

Matrix read_pgm(const std::filesystem::path& path) {
  ByteReader in(slurp(path), path.string());
  char magic[2];
  in.read(magic, 2);
  if (magic[0] != 'P' || magic[1] != '5')
    throw IoError("not a binary PGM file: " + path.string());
  const Index width = parse_pnm_int(in);
  const Index height = parse_pnm_int(in);
  const Index maxval = parse_pnm_int(in);
  if (maxval < 1 || maxval > 65535)
    throw IoError("unsupported PGM maxval in " + path.string());
  Matrix image(height, width);
  const double scale = 1.0 / static_cast<double>(maxval);
  if (maxval < 256) {
    for (Index r = 0; r < height; ++r)
      for (Index c = 0; c < width; ++c) image(r, c) = in.u8() * scale;
  } else {
    for (Index r = 0; r < height; ++r)
      for (Index c = 0; c < width; ++c) {
        const Index hi = in.u8(), lo = in.u8();
        image(r, c) = static_cast<double>(hi * 256 + lo) * scale;
      }
  }
  return image;
}

AtomicFileWriter::AtomicFileWriter(std::filesystem::path target)
    : target_(std::move(target)), temp_(target_) {
  temp_ += ".tmp";
  stream_.open(temp_, std::ios::binary | std::ios::trunc);
  if (!stream_) throw IoError("cannot open " + temp_.string() + " for writing");
}

AtomicFileWriter::~AtomicFileWriter() {
  if (!committed_) {
    stream_.close();
    std::error_code ec;
    std::filesystem::remove(temp_, ec);
  }
}

void AtomicFileWriter::append(const void* data, std::size_t size) {
  stream_.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
  if (!stream_) throw IoError("write failure on " + temp_.string());
}

void AtomicFileWriter::commit() {
  stream_.flush();
  if (!stream_) throw IoError("write failure on " + temp_.string());
  stream_.close();
  std::error_code ec;
  std::filesystem::rename(temp_, target_, ec);
  if (ec) throw IoError("cannot rename " + temp_.string() + " to " + target_.string());
  committed_ = true;
}

}  // namespace cosparse
