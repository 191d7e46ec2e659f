#include <algorithm>

#include "diffiety/form_span.hpp"

namespace diffiety {

namespace {

std::vector<AtomId> ordered_columns(const Diffiety& d, const std::vector<OneForm>& forms) {
  std::vector<AtomId> cols;
  for (const auto& f : forms)
    for (const auto& [c, a] : f.terms()) cols.push_back(c);
  std::sort(cols.begin(), cols.end());
  cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
  std::sort(cols.begin(), cols.end(), [&d](AtomId a, AtomId b) {
    if (d.column_less(a, b)) return true;
    if (d.column_less(b, a)) return false;
    return atom_structural_less(a, b);
  });
  return cols;
}

} // namespace

FormSpan::FormSpan(const Diffiety& d, std::vector<OneForm> generators)
    : diffiety_(std::make_shared<Diffiety>(d)), generators_(std::move(generators)) {
  columns_ = ordered_columns(d, generators_);
  PivotPolicy<Expr> policy{&diffiety_->assumptions()};
  echelon_ = std::make_shared<Ech>(static_cast<Eigen::Index>(columns_.size()), policy);
  std::vector<Ech::Vector> rows;
  for (const auto& g : generators_) rows.push_back(to_vector(g));
  echelon_->insert_all(rows);
  for (const auto& row : echelon_->rows()) basis_.push_back(to_form(row));
}

FormSpan::Ech::Vector FormSpan::to_vector(const OneForm& theta) const {
  Ech::Vector v = Ech::Vector::Constant(1, static_cast<Eigen::Index>(columns_.size()), Expr());
  for (std::size_t j = 0; j < columns_.size(); ++j) v(static_cast<Eigen::Index>(j)) = theta.coefficient(columns_[j]);
  return v;
}

OneForm FormSpan::to_form(const Ech::Vector& v) const {
  OneForm f;
  for (std::size_t j = 0; j < columns_.size(); ++j) f.add(columns_[j], v(static_cast<Eigen::Index>(j)));
  return f;
}

std::vector<AtomId> FormSpan::pivot_coordinates() const {
  std::vector<AtomId> out;
  for (auto p : echelon_->pivots()) out.push_back(columns_[static_cast<std::size_t>(p)]);
  return out;
}

MembershipCertificate FormSpan::reduce(const OneForm& theta) const {
  auto r = echelon_->reduce(to_vector(theta));
  MembershipCertificate cert;
  for (Eigen::Index i = 0; i < r.coefficients.size(); ++i) cert.coefficients.push_back(r.coefficients(i));
  cert.remainder = to_form(r.remainder);
  for (const auto& [c, a] : theta.terms())
    if (!std::binary_search(columns_.begin(), columns_.end(), c, [this](AtomId x, AtomId y) {
          if (diffiety_->column_less(x, y)) return true;
          if (diffiety_->column_less(y, x)) return false;
          return atom_structural_less(x, y);
        }))
      cert.remainder.add(c, a);
  return cert;
}

std::optional<std::vector<Expr>> FormSpan::expand(const OneForm& theta) const {
  MembershipCertificate cert = reduce(theta);
  if (!cert.member()) return std::nullopt;
  std::vector<Expr> out(generators_.size());
  const auto& t = echelon_->transform();
  for (std::size_t i = 0; i < cert.coefficients.size(); ++i) {
    if (cert.coefficients[i].is_zero()) continue;
    for (std::size_t k = 0; k < generators_.size(); ++k)
      out[k] += cert.coefficients[i] * t[i](static_cast<Eigen::Index>(k));
  }
  return out;
}

FormSpan FormSpan::extended(const std::vector<OneForm>& more) const {
  std::vector<OneForm> g = generators_;
  g.insert(g.end(), more.begin(), more.end());
  return FormSpan(*diffiety_, std::move(g));
}

namespace {

FormSpan kernel_of(const FormSpan& theta, const std::function<OneForm(const OneForm&)>& lie) {
  const Diffiety& d = theta.diffiety();
  const auto& basis = theta.basis();
  std::vector<OneForm> rems;
  for (const auto& b : basis) rems.push_back(theta.reduce(lie(b)).remainder);
  std::vector<AtomId> cols = ordered_columns(d, rems);
  Echelon<Expr> ech(static_cast<Eigen::Index>(cols.size()), PivotPolicy<Expr>{&d.assumptions()});
  std::vector<Echelon<Expr>::Vector> rows;
  for (const auto& r : rems) {
    Echelon<Expr>::Vector v = Echelon<Expr>::Vector::Constant(1, static_cast<Eigen::Index>(cols.size()), Expr());
    for (std::size_t j = 0; j < cols.size(); ++j) v(static_cast<Eigen::Index>(j)) = r.coefficient(cols[j]);
    rows.push_back(std::move(v));
  }
  std::vector<OneForm> kernel;
  for (const auto& relation : ech.insert_all(rows)) {
    if (!relation) continue;
    OneForm k;
    for (Eigen::Index i = 0; i < relation->size(); ++i) k += (*relation)(i) * basis[static_cast<std::size_t>(i)];
    kernel.push_back(std::move(k));
  }
  return FormSpan(d, std::move(kernel));
}

} // namespace

FormSpan ker_D(const FormSpan& theta) {
  const Diffiety& d = theta.diffiety();
  return kernel_of(theta, [&d](const OneForm& t) { return lie_derivative_D(d, t); });
}

FormSpan ker_along(const FormSpan& theta, const VectorField& z) {
  const Diffiety& d = theta.diffiety();
  return kernel_of(theta, [&d, &z](const OneForm& t) { return lie_derivative(d, z, t); });
}

bool span_equal(const FormSpan& a, const FormSpan& b) {
  if (a.rank() != b.rank()) return false;
  for (const auto& g : a.basis())
    if (!b.contains(g)) return false;
  for (const auto& g : b.basis())
    if (!a.contains(g)) return false;
  return true;
}

bool flatness_check(const FormSpan& s) {
  const Diffiety& d = s.diffiety();
  // Each pivot differential is congruent to minus the rest of its row.
  std::map<AtomId, std::vector<std::pair<AtomId, Expr>>> rewrite;
  auto pivots = s.pivot_coordinates();
  for (std::size_t i = 0; i < pivots.size(); ++i) {
    std::vector<std::pair<AtomId, Expr>> rest;
    for (const auto& [c, a] : s.basis()[i].terms())
      if (c != pivots[i]) rest.emplace_back(c, -a);
    rewrite.emplace(pivots[i], std::move(rest));
  }
  auto expand = [&](AtomId a) -> std::vector<std::pair<AtomId, Expr>> {
    auto it = rewrite.find(a);
    if (it == rewrite.end()) return {{a, Expr(1)}};
    return it->second;
  };
  for (const auto& g : s.basis()) {
    TwoForm eta = exterior_derivative(d, g);
    TwoForm reduced;
    for (const auto& [k, c] : eta.terms())
      for (const auto& [p, cp] : expand(k.first))
        for (const auto& [q, cq] : expand(k.second)) reduced.add(p, q, c * cp * cq);
    if (!reduced.is_zero()) return false;
  }
  return true;
}

FormSpan seed_span(const Diffiety& d, int l) {
  std::vector<OneForm> g;
  if (l + d.shift() >= 0)
    for (AtomId c : d.seed_coordinates(l)) g.push_back(contact_form(d, Expr::atom(c)));
  return FormSpan(d, std::move(g));
}

FiltrationCheck check_good_filtration(const Diffiety& d, int l_max) {
  if (l_max < 1) throw MalformedInput("check_good_filtration needs l_max >= 1");
  FiltrationCheck out;
  bool all_contained = true;
  std::optional<int> equality_from;
  FormSpan next = seed_span(d, 0);
  for (int l = 0; l <= l_max; ++l) {
    FormSpan cur = next;
    next = seed_span(d, l + 1);
    std::vector<OneForm> images;
    bool contained = true;
    for (const auto& g : cur.generators()) {
      OneForm img = lie_derivative_D(d, g);
      if (!next.contains(img)) contained = false;
      images.push_back(std::move(img));
    }
    bool generating = contained && cur.extended(images).rank() == next.rank();
    out.levels.push_back({l, contained, generating});
    if (!contained) {
      all_contained = false;
      if (!out.first_failure) out.first_failure = l;
    }
    if (generating) {
      if (!equality_from) equality_from = l;
    } else {
      equality_from.reset();
    }
  }
  out.equality_from = equality_from;
  out.good = all_contained && equality_from.has_value();
  if (!out.good && !out.first_failure) out.first_failure = l_max;
  return out;
}

} // namespace diffiety
