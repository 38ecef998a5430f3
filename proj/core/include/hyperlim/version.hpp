#ifndef HYPERLIM_VERSION_HPP
#define HYPERLIM_VERSION_HPP

#define HYPERLIM_VERSION "0.1.0"

#endif  // HYPERLIM_VERSION_HPP
