#pragma once

#include <fdmi/circuit.hpp>
#include <fdmi/errors.hpp>
#include <fdmi/io.hpp>
#include <fdmi/magnetics.hpp>
#include <fdmi/model.hpp>
#include <fdmi/network.hpp>
#include <fdmi/scenarios.hpp>
#include <fdmi/selfcheck.hpp>
