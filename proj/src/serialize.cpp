#include <cstring>

#include "nadp/bank.hpp"
#include "nadp/error.hpp"
#include "nadp/file_util.hpp"

namespace nadp {

namespace {

constexpr char kBankMagic[4] = {'N', 'A', 'D', 'B'};
constexpr std::uint16_t kBankVersion = 1;

class Reader {
 public:
  explicit Reader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  void need(std::size_t n) const {
    if (bytes_.size() - pos_ < n) throw Error(Errc::CorruptFile, "predictor blob truncated");
  }
  std::uint16_t u16() { need(2); auto v = get_u16(bytes_, pos_); pos_ += 2; return v; }
  std::uint32_t u32() { need(4); auto v = get_u32(bytes_, pos_); pos_ += 4; return v; }
  double f64() { need(8); auto v = get_f64(bytes_, pos_); pos_ += 8; return v; }
  template <std::size_t N>
  std::array<double, N> block() {
    std::array<double, N> a{};
    for (double& v : a) v = f64();
    return a;
  }
  /// Element count, rejected early if the blob cannot hold that many.
  std::size_t count(std::size_t element_bytes) {
    const std::size_t n = u32();
    need(n * element_bytes);
    return n;
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<std::uint8_t> serialize_bank(const PredictorBank& bank) {
  std::vector<std::uint8_t> out(kBankMagic, kBankMagic + 4);
  put_u16(out, kBankVersion);

  put_u32(out, static_cast<std::uint32_t>(bank.mlp.size()));
  for (const MlpNet& n : bank.mlp)
    for (double p : n.params()) put_f64(out, p);

  put_u32(out, static_cast<std::uint32_t>(bank.elman.size()));
  for (const ElmanNet& n : bank.elman) {
    for (double p : n.params()) put_f64(out, p);
    for (double c : n.context) put_f64(out, c);
  }

  put_u16(out, bank.has_rbf ? 1 : 0);
  if (bank.has_rbf) {
    const RbfNet& r = bank.rbf;
    put_u32(out, static_cast<std::uint32_t>(r.size()));
    put_f64(out, r.spread);
    put_f64(out, r.bias);
    put_f64(out, r.lin_b);
    for (std::size_t i = 0; i < r.size(); ++i) {
      for (double c : r.centers[i]) put_f64(out, c);
      put_f64(out, r.lin_w[i]);
    }
  }
  return out;
}

PredictorBank deserialize_bank(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kBankMagic, 4) != 0)
    throw Error(Errc::BadMagic, "not a predictor blob");
  Reader in(bytes.subspan(4));
  if (in.u16() != kBankVersion) throw Error(Errc::VersionMismatch, "unsupported predictor blob version");

  PredictorBank bank;
  bank.mlp.resize(in.count(8 * MlpNet::kParamCount));
  for (MlpNet& n : bank.mlp) n.set_params(in.block<MlpNet::kParamCount>());

  bank.elman.resize(in.count(8 * (ElmanNet::kParamCount + ElmanNet::kHidden)));
  for (ElmanNet& n : bank.elman) {
    n.set_params(in.block<ElmanNet::kParamCount>());
    n.context = in.block<ElmanNet::kHidden>();
  }

  bank.has_rbf = in.u16() != 0;
  if (bank.has_rbf) {
    const std::size_t count = in.count(8 * (kOrder + 1));
    bank.rbf.spread = in.f64();
    bank.rbf.bias = in.f64();
    bank.rbf.lin_b = in.f64();
    bank.rbf.centers.resize(count);
    bank.rbf.lin_w.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
      bank.rbf.centers[i] = in.block<kOrder>();
      bank.rbf.lin_w[i] = in.f64();
    }
  }
  if (!in.done()) throw Error(Errc::CorruptFile, "trailing bytes after predictor blob");
  return bank;
}

}  // namespace nadp
