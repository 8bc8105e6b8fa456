# Configuration package for amice-kit
