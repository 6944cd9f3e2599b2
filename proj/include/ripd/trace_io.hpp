#ifndef RIPD_TRACE_IO_HPP
#define RIPD_TRACE_IO_HPP

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ripd/errors.hpp"
#include "ripd/pd.hpp"
#include "ripd/run_state.hpp"

namespace ripd {

constexpr const char* kTraceSchemaKm = "ripd-trace-km-v1";
constexpr const char* kTraceSchemaBlock = "ripd-trace-block-v1";
constexpr const char* kTraceSchemaPd = "ripd-trace-pd-v1";

namespace detail {

inline std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace detail

/// Tab-delimited trace with one header row carrying the schema version and
/// column names, then one data row per recorded iteration.
inline void write_trace_km(std::ostream& os, const std::vector<TraceRow>& rows) {
  os << kTraceSchemaKm << "\titeration\tresidual\tstep_norm\talpha_n\tlambda_n\n";
  for (const auto& r : rows)
    os << r.iteration << '\t' << detail::fmt_double(r.residual) << '\t'
       << detail::fmt_double(r.step_norm) << '\t' << detail::fmt_double(r.alpha_n) << '\t'
       << detail::fmt_double(r.lambda_n) << '\n';
}

inline void write_trace_block(std::ostream& os, const std::vector<TraceRow>& rows) {
  os << kTraceSchemaBlock
     << "\titeration\tresidual\tresidual_x\tstep_norm\talpha_n\tlambda_n\tactive_blocks\tmask_"
        "bits\n";
  for (const auto& r : rows)
    os << r.iteration << '\t' << detail::fmt_double(r.residual) << '\t'
       << detail::fmt_double(r.residual_x) << '\t' << detail::fmt_double(r.step_norm) << '\t'
       << detail::fmt_double(r.alpha_n) << '\t' << detail::fmt_double(r.lambda_n) << '\t'
       << r.active_blocks << '\t' << r.mask_bits << '\n';
}

inline void write_trace_pd(std::ostream& os, const std::vector<PdTraceRow>& rows) {
  os << kTraceSchemaPd
     << "\titeration\tprimal_residual\tdual_residual\tobjective\tstep_norm\tactive_primal\t"
        "active_dual\tevals_prox\tevals_grad\tevals_linop\n";
  for (const auto& r : rows)
    os << r.iteration << '\t' << detail::fmt_double(r.primal_residual) << '\t'
       << detail::fmt_double(r.dual_residual) << '\t' << detail::fmt_double(r.objective) << '\t'
       << detail::fmt_double(r.step_norm) << '\t' << r.active_primal << '\t' << r.active_dual
       << '\t' << r.evals_prox << '\t' << r.evals_grad << '\t' << r.evals_linop << '\n';
}

template <typename WriteFn>
inline void write_trace_file(const std::string& path, const WriteFn& write) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open trace file for writing: " + path);
  write(os);
  if (!os) throw IoError("failed writing trace file: " + path);
}

struct TraceFile {
  std::string schema;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Reads any trace file; an unknown schema token is an error, never a guess.
inline TraceFile read_trace(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open trace file: " + path);
  std::string header;
  if (!std::getline(is, header)) throw IoError("trace file is empty: " + path);

  TraceFile tf;
  {
    std::istringstream hs(header);
    std::string tok;
    if (!std::getline(hs, tok, '\t')) throw IoError("trace header is malformed: " + path);
    tf.schema = tok;
    while (std::getline(hs, tok, '\t')) tf.columns.push_back(tok);
  }
  if (tf.schema != kTraceSchemaKm && tf.schema != kTraceSchemaBlock && tf.schema != kTraceSchemaPd)
    throw IoError("unknown trace schema '" + tf.schema + "' in " + path);

  std::string line;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::vector<double> row;
    std::string tok;
    while (std::getline(ls, tok, '\t')) row.push_back(std::stod(tok));
    if (row.size() != tf.columns.size())
      throw IoError("trace row width does not match the header in " + path);
    tf.rows.push_back(std::move(row));
  }
  return tf;
}

}  // namespace ripd

#endif  // RIPD_TRACE_IO_HPP
