# Tests for kinetic-lna
