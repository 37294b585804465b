#include "zigzag/skeleton.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>

#include "zigzag/errors.hpp"

namespace zigzag {

namespace {

// Segment anchors: initial state, switches, terminal.
struct Anchor {
  double t;
  const Vector* x;
  const Vector* v;
};

std::vector<Anchor> anchors(const Skeleton& skel) {
  std::vector<Anchor> out;
  out.reserve(skel.points.size() + 2);
  out.push_back({skel.initial.time, &skel.initial.position, &skel.initial.velocity});
  for (const auto& p : skel.points) out.push_back({p.t, &p.x, &p.v});
  out.push_back({skel.terminal.t, &skel.terminal.x, &skel.terminal.v});
  return out;
}

}  // namespace

Vector interpolate(const Skeleton& skel, double t) {
  if (t < 0.0 || t > skel.total_time) {
    throw QueryOutOfRange("interpolation time outside [0, total_time]");
  }
  const auto segs = anchors(skel);
  // Last anchor with time <= t.
  size_t k = 0;
  for (size_t i = 1; i + 1 < segs.size(); ++i) {
    if (segs[i].t <= t) k = i;
  }
  const Anchor& s = segs[k];
  Vector out(*s.x);
  const double dt = t - s.t;
  for (size_t i = 0; i < out.size(); ++i) out[i] += (*s.v)[i] * dt;
  return out;
}

Matrix discretize(const Skeleton& skel, int n) {
  if (n < 2) throw Error("discretize needs n >= 2");
  const int d = skel.dim();
  Matrix grid(n, d);
  const auto segs = anchors(skel);
  size_t k = 0;
  for (int r = 0; r < n; ++r) {
    double t = skel.total_time * static_cast<double>(r) / static_cast<double>(n - 1);
    t = std::min(t, skel.total_time);
    while (k + 2 < segs.size() && segs[k + 1].t <= t) ++k;
    const Anchor& s = segs[k];
    const double dt = t - s.t;
    for (int c = 0; c < d; ++c) {
      grid.at(r, c) = (*s.x)[static_cast<size_t>(c)] +
                      (*s.v)[static_cast<size_t>(c)] * dt;
    }
  }
  return grid;
}

std::string format_double17(double v) {
  char tmp[32];
  std::snprintf(tmp, sizeof(tmp), "%.17g", v);
  return tmp;
}

void write_skeleton_csv(const std::string& path, const Skeleton& skel) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write skeleton CSV: " + path);
  const int d = skel.dim();
  std::string buf = "t";
  for (int i = 1; i <= d; ++i) buf += ",x" + std::to_string(i);
  for (int i = 1; i <= d; ++i) buf += ",v" + std::to_string(i);
  buf += '\n';
  auto row = [&buf, d](double t, const Vector& x, const Vector& v) {
    buf += format_double17(t);
    for (int i = 0; i < d; ++i) {
      buf += ',';
      buf += format_double17(x[static_cast<size_t>(i)]);
    }
    for (int i = 0; i < d; ++i) {
      buf += ',';
      buf += format_double17(v[static_cast<size_t>(i)]);
    }
    buf += '\n';
  };
  row(skel.initial.time, skel.initial.position, skel.initial.velocity);
  for (const auto& p : skel.points) row(p.t, p.x, p.v);
  row(skel.terminal.t, skel.terminal.x, skel.terminal.v);
  out << buf;
}

}  // namespace zigzag
