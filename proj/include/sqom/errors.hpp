#pragma once

#include <stdexcept>
#include <string>

namespace sqom {

// Bad or missing user input. The CLI maps this to exit code 2.
class parameter_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The physics is undefined at the requested point (pole, instability, ...).
// The CLI maps this to exit code 3. quantity() names the offending symbol.
class domain_error : public std::runtime_error {
 public:
  domain_error(std::string quantity, const std::string& what)
      : std::runtime_error(quantity + ": " + what), quantity_(std::move(quantity)) {}
  const std::string& quantity() const { return quantity_; }

 private:
  std::string quantity_;
};

class singularity_error : public domain_error {
 public:
  using domain_error::domain_error;
};

class stability_error : public domain_error {
 public:
  stability_error(bool marginal, const std::string& what)
      : domain_error("M", what), marginal_(marginal) {}
  bool marginal() const { return marginal_; }

 private:
  bool marginal_;
};

class optimizer_error : public domain_error {
 public:
  using domain_error::domain_error;
};

}  // namespace sqom
