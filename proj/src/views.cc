// Copyright 2026 The Fuse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "fuse/views.h"

#include <stdexcept>

namespace fuse {

void MemoryEnv::AddMemory(const std::string& name, const MemType& type) {
  memories_[name] = type;
}

void MemoryEnv::AddView(const ViewInfo& view) { views_[view.name] = view; }

void MemoryEnv::RemoveView(const std::string& name) { views_.erase(name); }

bool MemoryEnv::Has(const std::string& name) const {
  return memories_.count(name) > 0 || views_.count(name) > 0;
}

bool MemoryEnv::IsView(const std::string& name) const {
  return views_.count(name) > 0;
}

const MemType& MemoryEnv::TypeOf(const std::string& name) const {
  if (auto it = views_.find(name); it != views_.end()) return it->second.type;
  auto it = memories_.find(name);
  if (it == memories_.end()) throw std::out_of_range("unknown memory " + name);
  return it->second;
}

const ViewInfo* MemoryEnv::View(const std::string& name) const {
  auto it = views_.find(name);
  return it == views_.end() ? nullptr : &it->second;
}

const std::string& MemoryEnv::RootOf(const std::string& name) const {
  if (const ViewInfo* v = View(name)) return v->root;
  return memories_.find(name)->first;
}

std::vector<std::string> MemoryEnv::Chain(const std::string& name) const {
  std::vector<std::string> chain{name};
  while (const ViewInfo* v = View(chain.back())) chain.push_back(v->underlying);
  return chain;
}

std::string MemoryEnv::CreditDomain(const std::string& name) const {
  for (const std::string& n : Chain(name)) {
    const ViewInfo* v = View(n);
    if (v != nullptr && v->kind == ViewKind::kShift) return n;
  }
  return RootOf(name);
}

namespace {

[[noreturn]] void ViewError(Span span, const std::string& message) {
  Fail(codes::kView, span, message);
}

int64_t ConstantArg(const Expr& arg, const char* what) {
  bool inexact = false;
  std::optional<int64_t> v = FoldConstant(arg, &inexact);
  if (inexact) {
    Fail(codes::kDivides, arg.span,
         std::string(what) + " is not an exact quotient");
  }
  if (!v) ViewError(arg.span, std::string(what) + " must be a constant");
  return *v;
}

// Accepts `K * e`, `e * K` and constants; returns the constant coefficient,
// or nullopt when the offset is not aligned syntactically.
std::optional<int64_t> AlignedCoefficient(const Expr& arg, int64_t banks) {
  if (std::optional<int64_t> c = FoldConstant(arg)) {
    if (*c % banks == 0) return banks;
    return std::nullopt;
  }
  const auto* bin = std::get_if<Binary>(&arg.node);
  if (bin == nullptr || bin->op != BinOp::kMul) return std::nullopt;
  if (std::optional<int64_t> k = FoldConstant(*bin->lhs)) return k;
  if (std::optional<int64_t> k = FoldConstant(*bin->rhs)) return k;
  return std::nullopt;
}

}  // namespace

ViewInfo CheckViewDecl(const ViewDecl& decl, Span span, const MemoryEnv& env) {
  if (!env.Has(decl.underlying)) {
    Fail(codes::kType, span, "unknown memory '" + decl.underlying + "'");
  }
  const MemType& under = env.TypeOf(decl.underlying);
  ViewInfo view;
  view.name = decl.name;
  view.kind = decl.kind;
  view.underlying = decl.underlying;
  view.root = env.RootOf(decl.underlying);
  view.type = under;
  size_t dims = under.dims.size();
  if (decl.kind == ViewKind::kSplit) {
    if (dims != 1 || decl.args.size() != 1) {
      ViewError(span, "split views apply to one-dimensional memories only");
    }
    int64_t w = ConstantArg(*decl.args[0], "split factor");
    const BankSpec d = under.dims[0];
    if (w < 1 || d.banks % w != 0) {
      ViewError(decl.args[0]->span, "split factor " + std::to_string(w) +
                                        " does not divide banking factor " +
                                        std::to_string(d.banks));
    }
    view.factors = {w};
    view.type.dims = {BankSpec{w, w}, BankSpec{d.size / w, d.banks / w}};
    return view;
  }
  if (decl.args.size() != dims) {
    ViewError(span, "view '" + decl.name + "' needs " + std::to_string(dims) +
                        " arguments, got " + std::to_string(decl.args.size()));
  }
  for (size_t d = 0; d < dims; ++d) {
    const Expr& arg = *decl.args[d];
    const BankSpec& bs = under.dims[d];
    switch (decl.kind) {
      case ViewKind::kShrink: {
        int64_t f = ConstantArg(arg, "shrink factor");
        if (f < 1 || bs.banks % f != 0) {
          ViewError(arg.span, "shrink factor " + std::to_string(f) +
                                  " does not divide banking factor " +
                                  std::to_string(bs.banks));
        }
        view.factors.push_back(f);
        view.type.dims[d].banks = bs.banks / f;
        break;
      }
      case ViewKind::kSuffix: {
        std::optional<int64_t> k = AlignedCoefficient(arg, bs.banks);
        if (bs.banks != 1 && (!k || *k != bs.banks)) {
          ViewError(arg.span, "suffix offset must be a multiple of the banking "
                              "factor " + std::to_string(bs.banks) +
                              " written as " + std::to_string(bs.banks) +
                              " * e");
        }
        view.factors.push_back(bs.banks);
        view.offsets.push_back(decl.args[d]);
        break;
      }
      case ViewKind::kShift:
        view.offsets.push_back(decl.args[d]);
        break;
      case ViewKind::kSplit:
        break;
    }
  }
  return view;
}

BankSets AllBanks(const MemType& type) {
  BankSets out;
  for (const BankSpec& d : type.dims) {
    std::set<int64_t> s;
    for (int64_t b = 0; b < d.banks; ++b) s.insert(b);
    out.push_back(std::move(s));
  }
  return out;
}

BankSets MapBanksToUnderlying(const ViewInfo& view, const MemType& under,
                              const BankSets& banks) {
  switch (view.kind) {
    case ViewKind::kShrink: {
      BankSets out(banks.size());
      for (size_t d = 0; d < banks.size(); ++d) {
        int64_t view_banks = view.type.dims[d].banks;
        for (int64_t v : banks[d]) {
          for (int64_t j = 0; j < view.factors[d]; ++j) {
            out[d].insert(v + j * view_banks);
          }
        }
      }
      return out;
    }
    case ViewKind::kSuffix:
      return banks;
    case ViewKind::kShift:
      return AllBanks(under);
    case ViewKind::kSplit: {
      int64_t w = view.factors[0];
      std::set<int64_t> out;
      for (int64_t a : banks[0]) {
        for (int64_t c : banks[1]) out.insert(w * c + a);
      }
      return {out};
    }
  }
  return banks;
}

BankSets MapBanksDown(const MemoryEnv& env, const std::string& name,
                      const std::string& stop, const BankSets& banks) {
  BankSets cur = banks;
  std::string at = name;
  while (at != stop) {
    const ViewInfo* v = env.View(at);
    if (v == nullptr) break;
    cur = MapBanksToUnderlying(*v, env.TypeOf(v->underlying), cur);
    at = v->underlying;
  }
  return cur;
}

std::set<int64_t> FlatBankSet(const MemType& type, const BankSets& banks) {
  std::set<int64_t> flat{0};
  for (size_t d = 0; d < banks.size(); ++d) {
    std::set<int64_t> next;
    for (int64_t f : flat) {
      for (int64_t b : banks[d]) next.insert(f * type.dims[d].banks + b);
    }
    flat = std::move(next);
  }
  return flat;
}

std::vector<int64_t> ViewToUnderlying(const ViewInfo& view,
                                      const std::vector<int64_t>& index,
                                      const std::vector<int64_t>& offsets) {
  switch (view.kind) {
    case ViewKind::kShrink:
      return index;
    case ViewKind::kSuffix:
    case ViewKind::kShift: {
      std::vector<int64_t> out = index;
      for (size_t d = 0; d < out.size(); ++d) out[d] += offsets[d];
      return out;
    }
    case ViewKind::kSplit:
      return {index[1] * view.factors[0] + index[0]};
  }
  return index;
}

std::vector<ExprPtr> ViewToUnderlyingExpr(const ViewInfo& view,
                                          const std::vector<ExprPtr>& index,
                                          const std::vector<ExprPtr>& offsets) {
  switch (view.kind) {
    case ViewKind::kShrink:
      return index;
    case ViewKind::kSuffix:
    case ViewKind::kShift: {
      std::vector<ExprPtr> out;
      for (size_t d = 0; d < index.size(); ++d) {
        out.push_back(MakeBinary(BinOp::kAdd, offsets[d], index[d]));
      }
      return out;
    }
    case ViewKind::kSplit:
      return {MakeBinary(
          BinOp::kAdd,
          MakeBinary(BinOp::kMul, index[1], MakeInt(view.factors[0])),
          index[0])};
  }
  return index;
}

}  // namespace fuse
