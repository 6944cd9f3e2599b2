#ifndef RIPD_PROBLEM_IO_HPP
#define RIPD_PROBLEM_IO_HPP

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ripd/errors.hpp"
#include "ripd/pd.hpp"
#include "ripd/problems.hpp"

namespace ripd {

constexpr const char* kProblemSchema = "ripd-problem-v1";

/// zer(A + B) on one block space, stated per block; the input of the km,
/// block-km, and fb runs.
struct FixedPointProblem {
  BlockLayout layout;
  std::vector<MonotoneResolvent> A;      // per-block backward terms
  std::vector<SmoothGradient> B;         // per-block forward terms (block separable)
  std::optional<SmoothGradient> B_full;  // full-space forward term; overrides B
  double theta = 0.0;                    // 0 means "choose mu"

  double mu() const {
    if (B_full) return B_full->cocoercivity();
    double m = kInf;
    for (const auto& b : B) m = std::min(m, b.cocoercivity());
    return m;
  }

  ForwardBackwardProblem to_forward_backward() const {
    ForwardBackwardProblem fb;
    fb.mu = mu() == kInf ? 1.0 : mu();
    const auto* self = this;
    fb.resolvent_block = [self](Index i, const BlockVector& u, double th) {
      return self->A[static_cast<std::size_t>(i)].eval(u.block(i), th);
    };
    fb.forward = [self](const BlockVector& w) {
      if (self->B_full) return BlockVector(w.layout(), self->B_full->grad(w.data()));
      BlockVector out = BlockVector::zero(w.layout());
      for (Index i = 0; i < w.blocks(); ++i)
        out.block(i) = self->B[static_cast<std::size_t>(i)].grad(w.block(i));
      return out;
    };
    return fb;
  }
};

/// A problem file after loading: exactly one of the three kinds is present.
struct LoadedProblem {
  std::string kind;  // composite | monotone | fixed-point
  std::optional<CompositeProblem> composite;
  std::optional<MonotoneBlockProblem> monotone;
  std::optional<FixedPointProblem> fixed_point;
  std::optional<Preconditioner> prec;  // composite/monotone kinds
};

namespace io_detail {

using nlohmann::json;

[[noreturn]] inline void fail(const std::string& where, const std::string& what) {
  throw IoError("problem spec: " + where + ": " + what);
}

inline const json& field(const json& j, const std::string& key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) fail(where, "missing field '" + key + "'");
  return *it;
}

inline Eigen::VectorXd parse_vector(const json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of numbers");
  Eigen::VectorXd v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) fail(where, "expected an array of numbers");
    v[static_cast<Index>(i)] = j[i].get<double>();
  }
  return v;
}

inline Eigen::MatrixXd parse_matrix(const json& j, const std::string& where,
                                    const std::filesystem::path& base_dir) {
  if (!j.is_object()) fail(where, "expected a matrix object with rows/cols");
  const long rows = field(j, "rows", where).get<long>();
  const long cols = field(j, "cols", where).get<long>();
  if (rows < 1 || cols < 1) fail(where, "matrix dims must be positive");
  Eigen::MatrixXd M(rows, cols);
  if (j.contains("file")) {
    const std::filesystem::path path = base_dir / j["file"].get<std::string>();
    std::ifstream is(path);
    if (!is) fail(where, "cannot open matrix file " + path.string());
    for (long r = 0; r < rows; ++r)
      for (long c = 0; c < cols; ++c)
        if (!(is >> M(r, c))) fail(where, "matrix file " + path.string() + " is too short");
  } else {
    const json& data = field(j, "data", where);
    if (!data.is_array() || static_cast<long>(data.size()) != rows * cols)
      fail(where, "matrix data must hold rows*cols numbers (row-major)");
    for (long r = 0; r < rows; ++r)
      for (long c = 0; c < cols; ++c) M(r, c) = data[static_cast<std::size_t>(r * cols + c)];
  }
  return M;
}

inline json dump_matrix(const Eigen::MatrixXd& M) {
  json j;
  j["rows"] = M.rows();
  j["cols"] = M.cols();
  json data = json::array();
  for (Index r = 0; r < M.rows(); ++r)
    for (Index c = 0; c < M.cols(); ++c) data.push_back(M(r, c));
  j["data"] = std::move(data);
  return j;
}

inline json dump_vector(const Eigen::VectorXd& v) {
  json data = json::array();
  for (Index i = 0; i < v.size(); ++i) data.push_back(v[i]);
  return data;
}

// --- prox descriptors ---

inline ProxOperator parse_prox(const json& j, const std::string& where) {
  const std::string op = field(j, "op", where).get<std::string>();
  if (op == "zero") return make_prox_zero();
  if (op == "l1") return make_prox_l1(field(j, "weight", where).get<double>());
  if (op == "sql2") return make_prox_sql2(field(j, "weight", where).get<double>());
  if (op == "sql2_shift")
    return make_prox_sql2_shift(field(j, "weight", where).get<double>(),
                                parse_vector(field(j, "center", where), where + ".center"));
  if (op == "box")
    return make_prox_box(field(j, "lo", where).get<double>(),
                         field(j, "hi", where).get<double>());
  fail(where, "unknown prox operator '" + op + "'");
}

inline json dump_prox(const OpDescriptor& d) {
  json j;
  j["op"] = d.op;
  if (d.op == "l1" || d.op == "sql2") j["weight"] = d.weight;
  if (d.op == "sql2_shift") {
    j["weight"] = d.weight;
    j["center"] = dump_vector(d.vec);
  }
  if (d.op == "box") {
    j["lo"] = d.lo;
    j["hi"] = d.hi;
  }
  return j;
}

// --- gradient descriptors ---

inline SmoothGradient parse_gradient(const json& j, const std::string& where,
                                     const std::filesystem::path& base_dir) {
  const std::string op = field(j, "op", where).get<std::string>();
  if (op == "zero") return SmoothGradient::zero();
  if (op == "quadratic")
    return grad_quadratic(parse_matrix(field(j, "Q", where), where + ".Q", base_dir),
                          parse_vector(field(j, "c", where), where + ".c"));
  if (op == "least_squares")
    return grad_least_squares(parse_matrix(field(j, "K", where), where + ".K", base_dir),
                              parse_vector(field(j, "b", where), where + ".b"));
  fail(where, "unknown gradient operator '" + op + "'");
}

inline json dump_gradient(const OpDescriptor& d) {
  json j;
  j["op"] = d.op;
  if (d.op == "quadratic") {
    j["Q"] = dump_matrix(d.matrix);
    j["c"] = dump_vector(d.vec);
  }
  if (d.op == "least_squares") {
    j["K"] = dump_matrix(d.matrix);
    j["b"] = dump_vector(d.vec);
  }
  return j;
}

// --- resolvent descriptors ---

inline MonotoneResolvent parse_resolvent(const json& j, const std::string& where,
                                         const std::filesystem::path& base_dir) {
  const std::string op = field(j, "op", where).get<std::string>();
  if (op == "zero") return MonotoneResolvent::zero();
  if (op == "prox_of") return MonotoneResolvent::from_prox(parse_prox(field(j, "of", where), where + ".of"));
  if (op == "conjugate_of")
    return MonotoneResolvent::conjugate_of(parse_prox(field(j, "of", where), where + ".of"));
  if (op == "linear")
    return MonotoneResolvent::linear(
        parse_matrix(field(j, "matrix", where), where + ".matrix", base_dir));
  fail(where, "unknown resolvent operator '" + op + "'");
}

inline json dump_resolvent(const OpDescriptor& d) {
  json j;
  j["op"] = d.op;
  if (d.op == "prox_of" || d.op == "conjugate_of") j["of"] = dump_prox(*d.inner);
  if (d.op == "linear") j["matrix"] = dump_matrix(d.matrix);
  return j;
}

// --- coupling operator and preconditioner ---

inline LinearBlockOperator parse_coupling(const json& j, const BlockLayout& dual,
                                          const BlockLayout& primal,
                                          const std::filesystem::path& base_dir) {
  if (!j.is_array()) fail("L", "expected an array of block entries");
  std::vector<BlockEntry> entries;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string where = "L[" + std::to_string(i) + "]";
    BlockEntry e;
    e.row = field(j[i], "row", where).get<Index>();
    e.col = field(j[i], "col", where).get<Index>();
    e.matrix = parse_matrix(field(j[i], "matrix", where), where + ".matrix", base_dir);
    entries.push_back(std::move(e));
  }
  try {
    return LinearBlockOperator(dual, primal, std::move(entries));
  } catch (const InvalidInputError& e) {
    fail("L", e.what());
  }
}

inline json dump_coupling(const LinearBlockOperator& L) {
  json j = json::array();
  for (Index k = 0; k < L.row_layout().blocks(); ++k)
    for (Index jcol : L.row_support(k)) {
      json e;
      e["row"] = k;
      e["col"] = jcol;
      e["matrix"] = dump_matrix(L.block(k, jcol));
      j.push_back(std::move(e));
    }
  return j;
}

inline DiagonalOperator parse_diag(const json& j, const BlockLayout& layout,
                                   const std::string& where) {
  if (j.is_number()) return DiagonalOperator::constant(layout, j.get<double>());
  if (!j.is_array() || static_cast<Index>(j.size()) != layout.blocks())
    fail(where, "expected a constant or one diagonal array per block");
  Eigen::VectorXd diag(layout.total());
  for (Index b = 0; b < layout.blocks(); ++b) {
    const json& arr = j[static_cast<std::size_t>(b)];
    if (!arr.is_array() || static_cast<Index>(arr.size()) != layout.dim(b))
      fail(where, "block " + std::to_string(b) + " diagonal has wrong length");
    for (Index i = 0; i < layout.dim(b); ++i)
      diag[layout.offset(b) + i] = arr[static_cast<std::size_t>(i)].get<double>();
  }
  try {
    return DiagonalOperator(layout, std::move(diag));
  } catch (const InvalidInputError& e) {
    fail(where, e.what());
  }
}

inline json dump_diag(const DiagonalOperator& d) {
  json j = json::array();
  for (Index b = 0; b < d.layout().blocks(); ++b) {
    json arr = json::array();
    for (Index i = 0; i < d.layout().dim(b); ++i) arr.push_back(d.diag_block(b)[i]);
    j.push_back(std::move(arr));
  }
  return j;
}

inline void check_prox_dim(const OpDescriptor& d, Index dim, const std::string& where) {
  if (d.op == "sql2_shift" && d.vec.size() != dim)
    fail(where, "center length " + std::to_string(d.vec.size()) + " does not match block dim " +
                    std::to_string(dim));
}

inline void check_gradient_dim(const OpDescriptor& d, Index dim, const std::string& where) {
  if (d.op == "quadratic" && (d.matrix.rows() != dim || d.vec.size() != dim))
    fail(where, "quadratic shape does not match block dim " + std::to_string(dim));
  if (d.op == "least_squares" && d.matrix.cols() != dim)
    fail(where, "least_squares K has " + std::to_string(d.matrix.cols()) +
                    " columns but the block dim is " + std::to_string(dim));
}

inline void check_resolvent_dim(const OpDescriptor& d, Index dim, const std::string& where) {
  if (d.op == "linear" && d.matrix.rows() != dim)
    fail(where, "linear resolvent shape does not match block dim " + std::to_string(dim));
  if (d.inner) check_prox_dim(*d.inner, dim, where);
}

inline BlockLayout parse_layout(const json& slots, const std::string& where) {
  if (!slots.is_array() || slots.empty()) fail(where, "expected a nonempty array of slots");
  std::vector<Index> dims;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    const Index d = field(slots[i], "dim", where + "[" + std::to_string(i) + "]").get<Index>();
    if (d < 1) fail(where + "[" + std::to_string(i) + "]", "dim must be >= 1");
    dims.push_back(d);
  }
  return BlockLayout(std::move(dims));
}

}  // namespace io_detail

/// Parses a problem document; all structural invariants are checked on load
/// and failures name the offending field.
inline LoadedProblem parse_problem(const nlohmann::json& doc,
                                   const std::filesystem::path& base_dir = ".") {
  using io_detail::fail;
  using io_detail::field;
  using nlohmann::json;

  if (!doc.is_object()) fail("document", "expected a JSON object");
  const std::string schema = field(doc, "schema", "document").get<std::string>();
  if (schema != kProblemSchema)
    fail("schema", "unknown problem schema '" + schema + "'");

  LoadedProblem out;
  out.kind = field(doc, "kind", "document").get<std::string>();

  if (out.kind == "fixed-point") {
    const json& blocks = field(doc, "blocks", "document");
    BlockLayout layout = io_detail::parse_layout(blocks, "blocks");
    FixedPointProblem fp;
    fp.layout = layout;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
      const std::string where = "blocks[" + std::to_string(i) + "]";
      fp.A.push_back(io_detail::parse_resolvent(field(blocks[i], "A", where), where + ".A", base_dir));
      fp.B.push_back(io_detail::parse_gradient(field(blocks[i], "B", where), where + ".B", base_dir));
    }
    if (doc.contains("B_full"))
      fp.B_full = io_detail::parse_gradient(doc["B_full"], "B_full", base_dir);
    if (doc.contains("theta")) fp.theta = doc["theta"].get<double>();
    out.fixed_point = std::move(fp);
    return out;
  }

  if (out.kind != "composite" && out.kind != "monotone")
    fail("kind", "unknown problem kind '" + out.kind + "'");

  const json& primal = field(doc, "primal", "document");
  const json& dual = field(doc, "dual", "document");
  BlockLayout primal_layout = io_detail::parse_layout(primal, "primal");
  BlockLayout dual_layout = io_detail::parse_layout(dual, "dual");
  LinearBlockOperator L =
      io_detail::parse_coupling(field(doc, "L", "document"), dual_layout, primal_layout, base_dir);

  const json& prec = field(doc, "precond", "document");
  Preconditioner P;
  P.F = io_detail::parse_diag(field(prec, "F", "precond"), primal_layout, "precond.F");
  P.R = io_detail::parse_diag(field(prec, "R", "precond"), dual_layout, "precond.R");
  out.prec = std::move(P);

  if (out.kind == "composite") {
    std::vector<CompositePrimalSlot> ps;
    for (std::size_t j = 0; j < primal.size(); ++j) {
      const std::string where = "primal[" + std::to_string(j) + "]";
      CompositePrimalSlot slot;
      slot.f = io_detail::parse_prox(field(primal[j], "f", where), where + ".f");
      slot.h = io_detail::parse_gradient(field(primal[j], "h", where), where + ".h", base_dir);
      const Index dim = primal_layout.dim(static_cast<Index>(j));
      io_detail::check_prox_dim(slot.f.descriptor(), dim, where + ".f");
      io_detail::check_gradient_dim(slot.h.descriptor(), dim, where + ".h");
      ps.push_back(std::move(slot));
    }
    std::vector<CompositeDualSlot> ds;
    for (std::size_t k = 0; k < dual.size(); ++k) {
      const std::string where = "dual[" + std::to_string(k) + "]";
      CompositeDualSlot slot;
      slot.g = io_detail::parse_prox(field(dual[k], "g", where), where + ".g");
      slot.lstar = io_detail::parse_gradient(field(dual[k], "lstar", where), where + ".lstar", base_dir);
      const Index dim = dual_layout.dim(static_cast<Index>(k));
      io_detail::check_prox_dim(slot.g.descriptor(), dim, where + ".g");
      io_detail::check_gradient_dim(slot.lstar.descriptor(), dim, where + ".lstar");
      ds.push_back(std::move(slot));
    }
    out.composite.emplace(std::move(ps), std::move(ds), std::move(L));
  } else {
    std::vector<PrimalSlot> ps;
    for (std::size_t j = 0; j < primal.size(); ++j) {
      const std::string where = "primal[" + std::to_string(j) + "]";
      PrimalSlot slot;
      slot.A = io_detail::parse_resolvent(field(primal[j], "A", where), where + ".A", base_dir);
      slot.C = io_detail::parse_gradient(field(primal[j], "C", where), where + ".C", base_dir);
      const Index dim = primal_layout.dim(static_cast<Index>(j));
      io_detail::check_resolvent_dim(slot.A.descriptor(), dim, where + ".A");
      io_detail::check_gradient_dim(slot.C.descriptor(), dim, where + ".C");
      ps.push_back(std::move(slot));
    }
    std::vector<DualSlot> ds;
    for (std::size_t k = 0; k < dual.size(); ++k) {
      const std::string where = "dual[" + std::to_string(k) + "]";
      DualSlot slot;
      slot.Binv = io_detail::parse_resolvent(field(dual[k], "Binv", where), where + ".Binv", base_dir);
      slot.Dinv = io_detail::parse_gradient(field(dual[k], "Dinv", where), where + ".Dinv", base_dir);
      const Index dim = dual_layout.dim(static_cast<Index>(k));
      io_detail::check_resolvent_dim(slot.Binv.descriptor(), dim, where + ".Binv");
      io_detail::check_gradient_dim(slot.Dinv.descriptor(), dim, where + ".Dinv");
      ds.push_back(std::move(slot));
    }
    out.monotone.emplace(std::move(ps), std::move(ds), std::move(L));
  }
  return out;
}

inline LoadedProblem load_problem(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open problem file: " + path);
  nlohmann::json doc;
  try {
    is >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("problem spec: parse error in " + path + ": " + e.what());
  }
  return parse_problem(doc, std::filesystem::path(path).parent_path());
}

/// Serializes a loaded problem back to its document form; matrices inline,
/// row-major, with explicit dims.
inline nlohmann::json dump_problem(const LoadedProblem& p) {
  using nlohmann::json;
  json doc;
  doc["schema"] = kProblemSchema;
  doc["kind"] = p.kind;

  if (p.kind == "fixed-point") {
    const auto& fp = *p.fixed_point;
    json blocks = json::array();
    for (std::size_t i = 0; i < fp.A.size(); ++i) {
      json b;
      b["dim"] = fp.layout.dim(static_cast<Index>(i));
      b["A"] = io_detail::dump_resolvent(fp.A[i].descriptor());
      b["B"] = io_detail::dump_gradient(fp.B[i].descriptor());
      blocks.push_back(std::move(b));
    }
    doc["blocks"] = std::move(blocks);
    if (fp.B_full) doc["B_full"] = io_detail::dump_gradient(fp.B_full->descriptor());
    doc["theta"] = fp.theta;
    return doc;
  }

  const LinearBlockOperator& L =
      p.kind == "composite" ? p.composite->L() : p.monotone->L();
  json primal = json::array();
  json dual = json::array();
  if (p.kind == "composite") {
    for (Index j = 0; j < p.composite->p(); ++j) {
      json s;
      s["dim"] = L.col_layout().dim(j);
      s["f"] = io_detail::dump_prox(p.composite->primal(j).f.descriptor());
      s["h"] = io_detail::dump_gradient(p.composite->primal(j).h.descriptor());
      primal.push_back(std::move(s));
    }
    for (Index k = 0; k < p.composite->q(); ++k) {
      json s;
      s["dim"] = L.row_layout().dim(k);
      s["g"] = io_detail::dump_prox(p.composite->dual(k).g.descriptor());
      s["lstar"] = io_detail::dump_gradient(p.composite->dual(k).lstar.descriptor());
      dual.push_back(std::move(s));
    }
  } else {
    for (Index j = 0; j < p.monotone->p(); ++j) {
      json s;
      s["dim"] = L.col_layout().dim(j);
      s["A"] = io_detail::dump_resolvent(p.monotone->primal(j).A.descriptor());
      s["C"] = io_detail::dump_gradient(p.monotone->primal(j).C.descriptor());
      primal.push_back(std::move(s));
    }
    for (Index k = 0; k < p.monotone->q(); ++k) {
      json s;
      s["dim"] = L.row_layout().dim(k);
      s["Binv"] = io_detail::dump_resolvent(p.monotone->dual(k).Binv.descriptor());
      s["Dinv"] = io_detail::dump_gradient(p.monotone->dual(k).Dinv.descriptor());
      dual.push_back(std::move(s));
    }
  }
  doc["primal"] = std::move(primal);
  doc["dual"] = std::move(dual);
  doc["L"] = io_detail::dump_coupling(L);
  json prec;
  prec["F"] = io_detail::dump_diag(p.prec->F);
  prec["R"] = io_detail::dump_diag(p.prec->R);
  doc["precond"] = std::move(prec);
  return doc;
}

inline void save_problem(const LoadedProblem& p, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open problem file for writing: " + path);
  os << dump_problem(p).dump(2) << '\n';
  if (!os) throw IoError("failed writing problem file: " + path);
}

}  // namespace ripd

#endif  // RIPD_PROBLEM_IO_HPP
