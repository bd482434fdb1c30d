#pragma once

#include <complex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dsep/dict.hpp"

namespace dsep::detail {

class DictImpl {
 public:
  virtual ~DictImpl() = default;

  virtual std::size_t n() const = 0;
  virtual std::size_t m() const = 0;
  virtual DictKind kind() const = 0;
  virtual std::string describe() const = 0;
  virtual bool orthonormal_set() const = 0;
  virtual bool paired() const { return false; }

  // out has length m / n respectively and is overwritten.
  virtual void analyze(std::span<const double> signal, std::span<double> out) const = 0;
  virtual void synthesize(std::span<const double> coeffs, std::span<double> out) const = 0;

  virtual std::vector<std::complex<double>> analyze_slots(std::span<const double> signal) const;
  virtual std::pair<std::vector<double>, std::vector<double>> slot_atom(std::size_t k) const;
  virtual std::vector<double> atom(std::size_t k) const;
};

}  // namespace dsep::detail
