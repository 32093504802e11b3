#ifndef LCERT_SCOTT_HPP
#define LCERT_SCOTT_HPP

#include "lcert/term.hpp"
#include "lcert/types.hpp"
#include "lcert/value.hpp"

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lcert {

// λx1..xa. λy1..yn. y_i x1 .. xa, with `i` counted from 0.
Term gen_constructor(std::size_t arity, std::size_t count, std::size_t index);

struct Branch {
    std::size_t arity;
    Term body; // pattern variables free, last field is index 0
};

// discriminee b1 .. bn where a branch of arity a > 0 is wrapped in a binders
// and a nullary branch is passed unchanged.
Term match_lower(const Term& discriminee, const std::vector<Branch>& branches);

// Encoding through an injection into an already registered datatype.
struct Injection {
    SrcType target;
    std::function<Value(const Value&)> inject;
    // inverse of inject on its image; when absent the sampled table is used
    std::function<std::optional<Value>(const Value&)> project;
};

// Encoders and decoders for monomorphic datatype instances. Built during a
// setup phase, read-only afterwards.
class Registry {
  public:
    void declare(AdtDef def);
    bool declared(const std::string& name) const { return adts_.count(name) != 0; }
    const AdtDef& adt(const std::string& name) const;
    const std::map<std::string, AdtDef>& adts() const { return adts_; }

    // Every non-self field type must already be registered.
    void register_instance(const SrcType& instance);
    // Registers `instance` and, first, everything its fields need.
    void register_closure(const SrcType& instance);
    // Refuses the registration when two samples share an image.
    void register_injection(const SrcType& instance, Injection injection, const std::vector<Value>& samples);

    bool registered(const SrcType& instance) const;
    std::vector<SrcType> instances() const;

    Term encode(const SrcType& instance, const Value& v) const;
    std::optional<Value> decode(const SrcType& instance, const Term& t) const;

    // Extracted constructor term for ctor `index` of `instance`.
    Term constructor_term(const SrcType& instance, std::size_t index) const;
    std::size_t ctor_count(const SrcType& instance) const;

  private:
    struct InjectedEntry {
        Injection injection;
        std::map<std::string, Value> inverse; // printed target encoding -> source value
    };

    std::map<std::string, AdtDef> adts_;
    std::map<std::string, SrcType> plain_;           // key: instance.str()
    std::map<std::string, InjectedEntry> injected_;  // key: instance.str()
};

} // namespace lcert

#endif
