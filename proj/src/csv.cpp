#include "phasespace/csv.hpp"

#include <cstdio>
#include <fstream>
#include <unistd.h>

#include "phasespace/error.hpp"

namespace phasespace::csv {

std::string number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) throw Error(ErrorCode::InvalidArgument, "failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw Error(ErrorCode::InvalidArgument, "cannot move output into place at " + path.string());
  }
}

namespace {

void row(std::string& out, double a, double b, double c) {
  out += number(a);
  out += ',';
  out += number(b);
  out += ',';
  out += number(c);
  out += '\n';
}

}  // namespace

std::string timeseries(const ScenarioResult& r) {
  std::string out = "t,prob,phase\n";
  for (std::size_t k = 0; k < r.times.size(); ++k) row(out, r.times[k], r.probability[k], r.phase[k]);
  return out;
}

std::string frame(const Frame& f) {
  std::string out = "q,density,phase\n";
  for (std::size_t j = 0; j < f.q.size(); ++j) row(out, f.q[j], f.density[j], f.phase[j]);
  return out;
}

std::string wigner(const WignerField& w) {
  std::string out = "q,p,w\n";
  for (std::size_t j = 0; j < w.grid.n_q(); ++j)
    for (std::size_t k = 0; k < w.grid.n_p(); ++k) row(out, w.grid.q(j), w.grid.p(k), w.at(j, k));
  return out;
}

std::string husimi(const HusimiField& h) {
  std::string out = "re_z,im_z,h\n";
  for (std::size_t i = 0; i < h.grid.n_re; ++i)
    for (std::size_t k = 0; k < h.grid.n_im; ++k) row(out, h.grid.re(i), h.grid.im(k), h.at(i, k));
  return out;
}

}  // namespace phasespace::csv
