#pragma once

// Complex scalar fields psi(x, y) that the current and trace modules
// evaluate. A field may supply analytic derivatives through jet(); callers
// fall back to central differences of value() otherwise.

#include <memory>
#include <optional>

#include "slitflow/model.hpp"
#include "slitflow/vec2.hpp"

namespace slitflow {

/// Value and derivatives of a complex field at one point.
struct FieldJet {
  Complex value;
  CVec2 grad;
  Complex hxx, hxy, hyy;  ///< Hessian
  CVec2 grad_laplacian;   ///< gradient of the Laplacian

  Complex laplacian() const { return hxx + hyy; }
};

class ComplexField {
 public:
  virtual ~ComplexField() = default;

  /// Throws DomainError outside the field's domain.
  virtual Complex value(Vec2 p) const = 0;

  virtual bool contains(Vec2 p) const = 0;

  /// Connected component of the domain containing p. Finite-difference
  /// stencils must not mix components (the slit fields change branch at x = 0).
  virtual int side(Vec2 /*p*/) const { return 0; }

  /// Analytic derivatives, or nullopt when the field only supports value().
  virtual std::optional<FieldJet> jet(Vec2 /*p*/) const { return std::nullopt; }
};

/// sqrt(n0) e^{ikx}: the uniform current along x.
class PlaneWaveField final : public ComplexField {
 public:
  PlaneWaveField(double k, double n0 = 1.0) : k_(k), amplitude_(std::sqrt(n0)) {}
  Complex value(Vec2 p) const override;
  bool contains(Vec2) const override { return true; }
  std::optional<FieldJet> jet(Vec2 p) const override;

 private:
  double k_;
  double amplitude_;
};

/// cos(kx): real-valued, carries no current.
class StandingWaveField final : public ComplexField {
 public:
  explicit StandingWaveField(double k) : k_(k) {}
  Complex value(Vec2 p) const override;
  bool contains(Vec2) const override { return true; }
  std::optional<FieldJet> jet(Vec2 p) const override;

 private:
  double k_;
};

/// One slit at the origin: e^{ikr}/sqrt(r) for x > 0, e^{-ikr}/sqrt(r) for x < 0.
class SingleSlitField final : public ComplexField {
 public:
  explicit SingleSlitField(double k, double exclusion_radius = kDefaultExclusionRadius)
      : k_(k), exclusion_radius_(exclusion_radius) {}
  Complex value(Vec2 p) const override;
  bool contains(Vec2 p) const override;
  int side(Vec2 p) const override { return (p.x > 0.0) - (p.x < 0.0); }
  std::optional<FieldJet> jet(Vec2 p) const override;

  double k() const { return k_; }

 private:
  double k_;
  double exclusion_radius_;
};

/// Superposition of the two single-slit waves, normalised by 1/sqrt(2).
class DoubleSlitField final : public ComplexField {
 public:
  DoubleSlitField(double k, SlitGeometry geom) : k_(k), geom_(geom) {}
  Complex value(Vec2 p) const override;
  bool contains(Vec2 p) const override;
  int side(Vec2 p) const override { return (p.x > 0.0) - (p.x < 0.0); }
  std::optional<FieldJet> jet(Vec2 p) const override;

  double k() const { return k_; }
  const SlitGeometry &geometry() const { return geom_; }

 private:
  double k_;
  SlitGeometry geom_;
};

/// Forwards value() and contains() but hides the analytic jet, forcing
/// finite-difference paths. Used as the independent oracle route.
class ValueOnlyField final : public ComplexField {
 public:
  explicit ValueOnlyField(const ComplexField &inner) : inner_(&inner) {}
  Complex value(Vec2 p) const override { return inner_->value(p); }
  bool contains(Vec2 p) const override { return inner_->contains(p); }
  int side(Vec2 p) const override { return inner_->side(p); }

 private:
  const ComplexField *inner_;
};

/// Jet of the cylindrical wave e^{i*sign*k*r}/sqrt(r) centred at `centre`.
FieldJet radial_wave_jet(Vec2 p, Vec2 centre, double k, Branch branch);

}  // namespace slitflow
