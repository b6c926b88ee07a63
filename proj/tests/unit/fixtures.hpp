#pragma once

#include <pilotfeas/trial_model.hpp>

// The worked base design used throughout the suite: a two-arm definitive trial
// with 1000 eligible patients, target size 514, effect 0.3, unit standard
// deviation, one-sided alpha 0.025.
inline pilotfeas::DefinitiveDesign base_design() { return {514, 1000, 0.3}; }
