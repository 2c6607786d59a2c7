# Test package for isotoda
