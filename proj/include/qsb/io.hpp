#pragma once

// CSV emission: UTF-8, LF line endings, header row, reals with 17 significant
// digits so values round-trip bit-exactly.

#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "qsb/dynamics.hpp"
#include "qsb/spectrum.hpp"

namespace qsb {

inline std::string fmt_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_csv_row(std::ostream& os, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os << ',';
    os << cells[i];
  }
  os << '\n';
}

inline void write_spectrum_csv(std::ostream& os, const ModeSpectrum& s) {
  write_csv_row(os, {"index_or_class", "multiplicity", "E", "Omega", "Eplus", "Eminus",
                     "weight", "f"});
  for (std::size_t i = 0; i < s.modes.size(); ++i) {
    const Mode& m = s.modes[i];
    write_csv_row(os, {std::to_string(i), fmt_real(m.multiplicity), fmt_real(m.E),
                       fmt_real(m.Omega), fmt_real(m.Eplus), fmt_real(m.Eminus),
                       fmt_real(m.weight), fmt_real(m.f)});
  }
}

inline void write_trajectory_csv(std::ostream& os, const Trajectory& tr) {
  write_csv_row(os, {"t", "rho00_re", "rho01_re", "rho01_im", "rho11_re", "coherence",
                     "purity"});
  const std::vector<double>& coh = tr.scalars.at("coherence");
  const std::vector<double>& pur = tr.scalars.at("purity");
  for (std::size_t i = 0; i < tr.times.size(); ++i) {
    const Mat2& r = tr.states[i].matrix();
    write_csv_row(os, {fmt_real(tr.times[i]), fmt_real(r.a11.real()), fmt_real(r.a12.real()),
                       fmt_real(r.a12.imag()), fmt_real(r.a22.real()), fmt_real(coh[i]),
                       fmt_real(pur[i])});
  }
}

inline void write_coherence_csv(std::ostream& os, const Trajectory& tr) {
  write_csv_row(os, {"t", "coherence"});
  const std::vector<double>& coh = tr.scalars.at("coherence");
  for (std::size_t i = 0; i < tr.times.size(); ++i)
    write_csv_row(os, {fmt_real(tr.times[i]), fmt_real(coh[i])});
}

// F_closed_form is empty where no closed form applies (phi != pi/2, or a
// non-uniform coupled bath).
inline void write_fidelity_csv(std::ostream& os, const std::vector<double>& times,
                               const std::vector<double>& f_channel,
                               const std::vector<double>* f_closed) {
  write_csv_row(os, {"t", "F_closed_form", "F_channel"});
  for (std::size_t i = 0; i < times.size(); ++i)
    write_csv_row(os, {fmt_real(times[i]), f_closed ? fmt_real((*f_closed)[i]) : std::string{},
                       fmt_real(f_channel[i])});
}

}  // namespace qsb
