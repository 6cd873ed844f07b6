#ifndef FDPROP_FDPROP_HPP
#define FDPROP_FDPROP_HPP

#include "fdprop/deduction.hpp"
#include "fdprop/errors.hpp"
#include "fdprop/explanation.hpp"
#include "fdprop/model.hpp"
#include "fdprop/parse.hpp"
#include "fdprop/propagation.hpp"
#include "fdprop/rules.hpp"

#endif // FDPROP_FDPROP_HPP
