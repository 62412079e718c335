#include "framelab/document_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "framelab/frame_ops.hpp"

namespace framelab {

namespace {

Json encode_scalar(Complex z, Field field) {
  if (field == Field::Real) return z.real();
  return Json::array({z.real(), z.imag()});
}

Complex decode_scalar(const Json& j, const std::string& what) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw InputError(what + ": expected a number or an [re, im] pair");
}

const Json& require(const Json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw InputError(std::string("document is missing \"") + key + "\"");
  }
  return obj.at(key);
}

std::string format_double(double x) {
  if (!std::isfinite(x)) throw InputError("cannot serialise a non-finite number");
  if (x == 0.0) return std::signbit(x) ? "-0.0" : "0";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

int array_depth(const Json& j) {
  if (!j.is_array()) return 0;
  int d = 0;
  for (const auto& e : j) d = std::max(d, array_depth(e));
  return d + 1;
}

bool has_object(const Json& j) {
  if (j.is_object()) return true;
  if (j.is_array()) {
    for (const auto& e : j) {
      if (has_object(e)) return true;
    }
  }
  return false;
}

// Vectors of scalars and rows of [re, im] pairs go on one line.
bool inline_array(const Json& j) {
  if (j.empty()) return true;
  if (has_object(j)) return false;
  const int depth = array_depth(j);
  if (depth == 1) return true;
  if (depth != 2) return false;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2) return false;
  }
  return true;
}

void emit(const Json& j, int indent, std::string& out);

void emit_inline(const Json& j, std::string& out) {
  if (j.is_array()) {
    out += '[';
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i) out += ", ";
      emit_inline(j[i], out);
    }
    out += ']';
  } else {
    emit(j, 0, out);
  }
}

void emit(const Json& j, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent) + 2, ' ');
  const std::string close_pad(static_cast<std::size_t>(indent), ' ');
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      std::size_t i = 0;
      for (const auto& [key, value] : j.items()) {
        out += pad;
        out += Json(key).dump();
        out += ": ";
        emit(value, indent + 2, out);
        if (++i < j.size()) out += ',';
        out += '\n';
      }
      out += close_pad + "}";
      return;
    }
    case Json::value_t::array: {
      if (inline_array(j)) {
        emit_inline(j, out);
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        out += pad;
        emit(j[i], indent + 2, out);
        if (i + 1 < j.size()) out += ',';
        out += '\n';
      }
      out += close_pad + "]";
      return;
    }
    case Json::value_t::number_float:
      out += format_double(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}

Matrix stack_basis(const Json& j, Index n, const std::string& what) {
  if (!j.is_array() || j.empty()) throw InputError(what + ": expected a non-empty list of vectors");
  Matrix basis(n, static_cast<Index>(j.size()));
  for (std::size_t c = 0; c < j.size(); ++c) {
    const Vector v = decode_vector(j[c], what);
    if (v.size() != n) {
      throw InputError(what + ": basis vector has length " + std::to_string(v.size()) +
                       ", expected " + std::to_string(n));
    }
    basis.col(static_cast<Index>(c)) = v;
  }
  return basis;
}

}  // namespace

Json encode_matrix(const Matrix& m, Field field) {
  Json rows = Json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(encode_scalar(m(r, c), field));
    rows.push_back(std::move(row));
  }
  return rows;
}

Json encode_vector(const Vector& v, Field field) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(encode_scalar(v(i), field));
  return out;
}

Matrix decode_matrix(const Json& j, const std::string& what) {
  if (!j.is_array()) throw InputError(what + ": expected an array of rows");
  const auto rows = static_cast<Index>(j.size());
  Index cols = -1;
  Matrix m;
  for (Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array()) throw InputError(what + ": row " + std::to_string(r) + " is not an array");
    if (cols < 0) {
      cols = static_cast<Index>(row.size());
      m.resize(rows, cols);
    } else if (static_cast<Index>(row.size()) != cols) {
      throw InputError(what + ": ragged rows");
    }
    for (Index c = 0; c < cols; ++c) m(r, c) = decode_scalar(row[static_cast<std::size_t>(c)], what);
  }
  if (!all_finite(m)) throw InputError(what + ": non-finite entry");
  return m;
}

Vector decode_vector(const Json& j, const std::string& what) {
  if (!j.is_array()) throw InputError(what + ": expected an array");
  Vector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = decode_scalar(j[i], what);
  if (!all_finite(v)) throw InputError(what + ": non-finite entry");
  return v;
}

Json document_to_json(const FrameDocument& doc) {
  const Field field = doc.system.space().field;
  Json j;
  j["name"] = doc.name;
  j["field"] = to_string(field);
  j["dim"] = doc.system.dim();

  Json weights = Json::array();
  Json subspaces = Json::array();
  Json locals = Json::array();
  for (const auto& m : doc.system.members()) {
    weights.push_back(m.subspace.weight());
    Json basis = Json::array();
    const Matrix& b = m.subspace.basis();
    for (Index c = 0; c < b.cols(); ++c) basis.push_back(encode_vector(b.col(c), field));
    subspaces.push_back(std::move(basis));
    locals.push_back(encode_matrix(m.local.matrix, field));
  }
  j["weights"] = std::move(weights);
  j["subspaces"] = std::move(subspaces);
  j["local_operators"] = std::move(locals);

  Json ops = Json::object();
  for (const auto& [name, m] : doc.operators) ops[name] = encode_matrix(m, field);
  j["operators"] = std::move(ops);

  if (!doc.claims.empty()) {
    Json claims = Json::array();
    for (const auto& c : doc.claims) {
      Json cj;
      cj["operator"] = c.operator_name;
      cj["is_frame"] = c.is_frame;
      if (c.lower) cj["lower"] = *c.lower;
      if (c.upper) cj["upper"] = *c.upper;
      cj["source"] = c.source;
      claims.push_back(std::move(cj));
    }
    j["claims"] = std::move(claims);
  }
  return j;
}

FrameDocument document_from_json(const Json& j) {
  if (!j.is_object()) throw InputError("document must be an object");
  try {
    const std::string name = j.value("name", std::string("unnamed"));
    const Field field = field_from_string(require(j, "field").get<std::string>());
    const Json& dim_j = require(j, "dim");
    if (!dim_j.is_number_integer() || dim_j.get<long long>() < 1) {
      throw InputError("\"dim\" must be a positive integer");
    }
    const auto n = static_cast<Index>(dim_j.get<long long>());

    const Json& weights = require(j, "weights");
    const Json& subspaces = require(j, "subspaces");
    const Json& locals = require(j, "local_operators");
    if (!weights.is_array() || !subspaces.is_array() || !locals.is_array()) {
      throw InputError("weights, subspaces and local_operators must be arrays");
    }
    if (weights.size() != subspaces.size() || weights.size() != locals.size()) {
      throw InputError("weights, subspaces and local_operators have different lengths");
    }

    std::vector<Member> members;
    for (std::size_t m = 0; m < weights.size(); ++m) {
      const std::string tag = "member " + std::to_string(m);
      if (!weights[m].is_number()) throw InputError(tag + ": weight is not a number");
      const Matrix basis = stack_basis(subspaces[m], n, tag + " subspace");
      const Matrix local = decode_matrix(locals[m], tag + " local operator");
      if (local.cols() != n) {
        throw InputError(tag + ": local operator has " + std::to_string(local.cols()) +
                         " columns, expected " + std::to_string(n));
      }
      members.push_back(Member{WeightedSubspace(basis, weights[m].get<double>()), LocalOperator{local}});
    }
    GFusionSystem system(HilbertSpace{field, n}, std::move(members));

    std::map<std::string, Matrix> operators;
    if (j.contains("operators")) {
      const Json& ops = j.at("operators");
      if (!ops.is_object()) throw InputError("\"operators\" must be an object");
      for (const auto& [key, value] : ops.items()) {
        Matrix op = decode_matrix(value, "operator " + key);
        if (op.rows() != n || op.cols() != n) {
          throw InputError("operator " + key + " is not " + std::to_string(n) + "x" + std::to_string(n));
        }
        operators.emplace(key, std::move(op));
      }
    }

    std::vector<FrameClaim> claims;
    if (j.contains("claims")) {
      for (const auto& cj : j.at("claims")) {
        FrameClaim c;
        c.operator_name = require(cj, "operator").get<std::string>();
        c.is_frame = cj.value("is_frame", true);
        if (cj.contains("lower")) c.lower = cj.at("lower").get<double>();
        if (cj.contains("upper")) c.upper = cj.at("upper").get<double>();
        c.source = cj.value("source", std::string());
        claims.push_back(std::move(c));
      }
    }
    return FrameDocument{name, std::move(system), std::move(operators), std::move(claims)};
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed document: ") + e.what());
  } catch (const PreconditionError& e) {
    throw InputError(std::string("invalid system: ") + e.what());
  }
}

std::string format_json(const Json& j) {
  std::string out;
  emit(j, 0, out);
  out += '\n';
  return out;
}

Json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(origin + ": " + e.what());
  }
}

std::string save_document_text(const FrameDocument& doc) { return format_json(document_to_json(doc)); }

FrameDocument load_document_text(const std::string& text, const std::string& origin) {
  return document_from_json(parse_json_text(text, origin));
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path);
  out << text;
  if (!out) throw InputError("write failed for " + path);
}

FrameDocument load_document(const std::string& path) {
  return load_document_text(read_text_file(path), path);
}

void save_document(const std::string& path, const FrameDocument& doc) {
  write_text_file(path, save_document_text(doc));
}

Json oracle_sidecar(const FrameDocument& doc) {
  const Tolerance tol;
  const SynthesisOperator t(doc.system);
  const Matrix s = t.matrix() * t.analysis();
  const HermitianEig eig = hermitian_eig(s, tol);
  const double b_op = eig.values.size() ? eig.values(eig.values.size() - 1) : 0.0;
  const Index rank_t = numerical_rank(t.matrix(), tol);

  Json j;
  j["name"] = doc.name;
  Json spectrum = Json::array();
  for (Index i = 0; i < eig.values.size(); ++i) spectrum.push_back(eig.values(i));
  j["frame_operator_spectrum"] = std::move(spectrum);
  j["B_op"] = b_op;

  Json ops = Json::object();
  for (const auto& [name, k] : doc.operators) {
    Matrix augmented(t.matrix().rows(), t.matrix().cols() + k.cols());
    augmented << t.matrix(), k;
    const bool is_frame = numerical_rank(augmented, tol) == rank_t;
    Json oj;
    oj["rank"] = numerical_rank(k, tol);
    oj["invertible"] = numerical_rank(k, tol) == k.rows();
    oj["is_frame"] = is_frame;
    if (is_frame) {
      const double a_op = bisection_lower_bound(s, k * k.adjoint());
      oj["A_op"] = std::isfinite(a_op) ? Json(a_op) : Json(nullptr);
    }
    oj["B_op"] = b_op;
    ops[name] = std::move(oj);
  }
  j["operators"] = std::move(ops);
  return j;
}

}  // namespace framelab
