// Instance archive I/O.  Binary layout (all fields little-endian):
//   8 bytes   magic "RAIPPAR1"
//   u8        kind: 0 = qp, 1 = lc
//   u64       l, n, seed
//   f64       density
//   qp only:  u8 calibration (0 exact, 1 conservative);
//             f64 target_M, target_m, gamma, c
//   lc only:  f64 L_f, alpha, A_norm
//   f64[n]    D
//   f64[l]    b
//   operators A then B, each matrix as: u64 nnz, then nnz x (u32 row,
//             u32 col, f64 value)
//   lc only:  f64[n*n] z0
// A JSON metadata sidecar is written next to the archive as <path>.json.
#include <algorithm>
#include <bit>
#include <cstdint>
#include <fstream>
#include <memory>
#include <stdexcept>

#include <json.hpp>

#include "raipp/problems.hpp"

namespace raipp {

namespace {

constexpr char kMagic[8] = {'R', 'A', 'I', 'P', 'P', 'A', 'R', '1'};

// The sandbox targets are little-endian; fail loudly anywhere else rather
// than silently writing incompatible archives.
static_assert(std::endian::native == std::endian::little,
              "archive code assumes a little-endian host");

struct Writer {
  std::ofstream out;
  explicit Writer(const std::string& path)
      : out(path, std::ios::binary | std::ios::trunc) {
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
  }
  template <class T>
  void put(const T& v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(T));
  }
  void put_vec(const Vec& v) {
    out.write(reinterpret_cast<const char*>(v.data()),
              static_cast<std::streamsize>(sizeof(double)) * v.size());
  }
  void put_ops(const SymOpSet& ops) {
    for (const CooSymMat& m : ops.mats) {
      put(static_cast<std::uint64_t>(m.entries.size()));
      for (const CooSymMat::Entry& e : m.entries) {
        put(e.row);
        put(e.col);
        put(e.value);
      }
    }
  }
};

struct Reader {
  std::ifstream in;
  std::string path;
  explicit Reader(const std::string& p) : in(p, std::ios::binary), path(p) {
    if (!in) throw std::runtime_error("cannot open archive: " + p);
  }
  template <class T>
  T get() {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw std::runtime_error("truncated archive: " + path);
    return v;
  }
  Vec get_vec(Eigen::Index size) {
    Vec v(size);
    in.read(reinterpret_cast<char*>(v.data()),
            static_cast<std::streamsize>(sizeof(double)) * size);
    if (!in) throw std::runtime_error("truncated archive: " + path);
    return v;
  }
  SymOpSet get_ops(Eigen::Index count, Eigen::Index n) {
    SymOpSet ops;
    ops.n = n;
    ops.mats.resize(static_cast<std::size_t>(count));
    for (CooSymMat& m : ops.mats) {
      const auto nnz = get<std::uint64_t>();
      m.entries.resize(nnz);
      for (CooSymMat::Entry& e : m.entries) {
        e.row = get<std::uint32_t>();
        e.col = get<std::uint32_t>();
        e.value = get<double>();
        if (e.row >= n || e.col >= n)
          throw std::runtime_error("corrupt archive (index range): " + path);
      }
    }
    return ops;
  }
};

std::uint64_t total_nnz(const SymOpSet& ops) {
  std::uint64_t s = 0;
  for (const CooSymMat& m : ops.mats) s += m.entries.size();
  return s;
}

void write_sidecar(const std::string& path, nlohmann::json meta) {
  std::ofstream js(path + ".json", std::ios::trunc);
  if (!js) throw std::runtime_error("cannot write sidecar for " + path);
  js << meta.dump(2) << '\n';
}

std::uint8_t read_header_kind(Reader& r) {
  char magic[8];
  r.in.read(magic, 8);
  if (!r.in || !std::equal(magic, magic + 8, kMagic))
    throw std::runtime_error("not an instance archive: " + r.path);
  return r.get<std::uint8_t>();
}

}  // namespace

void save_instance(const QpInstance& inst, const std::string& path) {
  Writer w(path);
  w.out.write(kMagic, 8);
  w.put(std::uint8_t{0});
  w.put(static_cast<std::uint64_t>(inst.l));
  w.put(static_cast<std::uint64_t>(inst.n));
  w.put(inst.seed);
  w.put(inst.density);
  w.put(static_cast<std::uint8_t>(inst.calibration));
  w.put(inst.target_M);
  w.put(inst.target_m);
  w.put(inst.gamma);
  w.put(inst.c_scalar);
  w.put_vec(inst.D);
  w.put_vec(inst.b);
  w.put_ops(inst.A);
  w.put_ops(inst.B);
  if (!w.out) throw std::runtime_error("write failed: " + path);
  write_sidecar(path,
                {{"kind", "qp"},
                 {"l", inst.l},
                 {"n", inst.n},
                 {"density", inst.density},
                 {"seed", inst.seed},
                 {"calibration", inst.calibration == Calibration::ExactHessian
                                     ? "exact_hessian"
                                     : "conservative"},
                 {"target_M", inst.target_M},
                 {"target_m", inst.target_m},
                 {"gamma", inst.gamma},
                 {"c", inst.c_scalar},
                 {"nnz_A", total_nnz(inst.A)},
                 {"nnz_B", total_nnz(inst.B)}});
}

void save_instance(const LcInstance& inst, const std::string& path) {
  Writer w(path);
  w.out.write(kMagic, 8);
  w.put(std::uint8_t{1});
  w.put(static_cast<std::uint64_t>(inst.l));
  w.put(static_cast<std::uint64_t>(inst.n));
  w.put(inst.seed);
  w.put(inst.density);
  w.put(inst.L_f);
  w.put(inst.alpha);
  w.put(inst.A_norm);
  w.put_vec(inst.D);
  w.put_vec(inst.b);
  w.put_ops(inst.A);
  w.put_ops(inst.B);
  w.put_vec(inst.z0);
  if (!w.out) throw std::runtime_error("write failed: " + path);
  write_sidecar(path, {{"kind", "lc"},
                       {"l", inst.l},
                       {"n", inst.n},
                       {"density", inst.density},
                       {"seed", inst.seed},
                       {"L_f", inst.L_f},
                       {"alpha", inst.alpha},
                       {"A_norm", inst.A_norm},
                       {"nnz_A", total_nnz(inst.A)},
                       {"nnz_B", total_nnz(inst.B)}});
}

QpInstance load_qp_instance(const std::string& path) {
  Reader r(path);
  if (read_header_kind(r) != 0)
    throw std::runtime_error("archive is not a qp instance: " + path);
  QpInstance inst;
  inst.l = static_cast<Eigen::Index>(r.get<std::uint64_t>());
  inst.n = static_cast<Eigen::Index>(r.get<std::uint64_t>());
  inst.seed = r.get<std::uint64_t>();
  inst.density = r.get<double>();
  inst.calibration = static_cast<Calibration>(r.get<std::uint8_t>());
  inst.target_M = r.get<double>();
  inst.target_m = r.get<double>();
  inst.gamma = r.get<double>();
  inst.c_scalar = r.get<double>();
  inst.D = r.get_vec(inst.n);
  inst.b = r.get_vec(inst.l);
  inst.A = r.get_ops(inst.l, inst.n);
  inst.B = r.get_ops(inst.n, inst.n);
  return inst;
}

LcInstance load_lc_instance(const std::string& path) {
  Reader r(path);
  if (read_header_kind(r) != 1)
    throw std::runtime_error("archive is not an lc instance: " + path);
  LcInstance inst;
  inst.l = static_cast<Eigen::Index>(r.get<std::uint64_t>());
  inst.n = static_cast<Eigen::Index>(r.get<std::uint64_t>());
  inst.seed = r.get<std::uint64_t>();
  inst.density = r.get<double>();
  inst.L_f = r.get<double>();
  inst.alpha = r.get<double>();
  inst.A_norm = r.get<double>();
  inst.D = r.get_vec(inst.n);
  inst.b = r.get_vec(inst.l);
  inst.A = r.get_ops(inst.l, inst.n);
  inst.B = r.get_ops(inst.n, inst.n);
  inst.z0 = r.get_vec(inst.n * inst.n);
  return inst;
}

std::string instance_kind(const std::string& path) {
  Reader r(path);
  return read_header_kind(r) == 0 ? "qp" : "lc";
}

}  // namespace raipp
