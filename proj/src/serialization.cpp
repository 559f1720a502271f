#include "entbound/serialization.hpp"

#include <fstream>
#include <stdexcept>

namespace entbound {

namespace {

std::vector<int> dims_from(const Json& record) {
  if (!record.contains("dims") || !record["dims"].is_array()) {
    throw std::invalid_argument("state record is missing a dims array");
  }
  std::vector<int> dims = record["dims"].get<std::vector<int>>();
  if (dims.empty()) throw std::invalid_argument("state record has empty dims");
  return dims;
}

std::vector<double> real_array(const Json& record, const char* key, size_t expect) {
  if (!record.contains(key) || !record[key].is_array()) {
    throw std::invalid_argument(std::string("state record is missing array: ") + key);
  }
  std::vector<double> out = record[key].get<std::vector<double>>();
  if (out.size() != expect) {
    throw std::invalid_argument(std::string("array has wrong length: ") + key);
  }
  return out;
}

}  // namespace

Json to_json(const MultipartiteState& rho) {
  const long d = rho.matrix.rows();
  std::vector<double> re(static_cast<size_t>(d) * d);
  std::vector<double> im(static_cast<size_t>(d) * d);
  for (long i = 0; i < d; ++i) {
    for (long j = 0; j < d; ++j) {
      re[static_cast<size_t>(i * d + j)] = rho.matrix(i, j).real();
      im[static_cast<size_t>(i * d + j)] = rho.matrix(i, j).imag();
    }
  }
  Json record{{"dims", rho.dims}, {"re", re}, {"im", im}};
  if (!rho.label.empty()) record["label"] = rho.label;
  return record;
}

Json to_json(const PureState& psi) {
  const long d = psi.vector.size();
  std::vector<double> re(static_cast<size_t>(d));
  std::vector<double> im(static_cast<size_t>(d));
  for (long i = 0; i < d; ++i) {
    re[static_cast<size_t>(i)] = psi.vector(i).real();
    im[static_cast<size_t>(i)] = psi.vector(i).imag();
  }
  Json record{{"dims", psi.dims}, {"vec_re", re}, {"vec_im", im}};
  if (!psi.label.empty()) record["label"] = psi.label;
  return record;
}

bool is_pure_record(const Json& record) {
  return record.contains("vec_re") && record.contains("vec_im");
}

MultipartiteState state_from_json(const Json& record) {
  const auto dims = dims_from(record);
  long d = 1;
  for (int v : dims) d *= v;
  const auto re = real_array(record, "re", static_cast<size_t>(d) * d);
  const auto im = real_array(record, "im", static_cast<size_t>(d) * d);
  Matrix m(d, d);
  for (long i = 0; i < d; ++i) {
    for (long j = 0; j < d; ++j) {
      m(i, j) = Complex(re[static_cast<size_t>(i * d + j)], im[static_cast<size_t>(i * d + j)]);
    }
  }
  MultipartiteState rho(dims, std::move(m), record.value("label", std::string{}));
  rho.validate();
  return rho;
}

PureState pure_from_json(const Json& record) {
  const auto dims = dims_from(record);
  long d = 1;
  for (int v : dims) d *= v;
  const auto re = real_array(record, "vec_re", static_cast<size_t>(d));
  const auto im = real_array(record, "vec_im", static_cast<size_t>(d));
  Vector v(d);
  for (long i = 0; i < d; ++i) {
    v(i) = Complex(re[static_cast<size_t>(i)], im[static_cast<size_t>(i)]);
  }
  PureState psi(dims, std::move(v), record.value("label", std::string{}));
  psi.validate();
  return psi;
}

MultipartiteState load_state(const std::string& path) {
  const Json record = read_json_file(path);
  if (is_pure_record(record)) return pure_from_json(record).to_state();
  return state_from_json(record);
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  Json value;
  in >> value;
  return value;
}

void write_json_file(const std::string& path, const Json& value) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << value.dump(2) << "\n";
}

}  // namespace entbound
