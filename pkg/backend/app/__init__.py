# Empty file to mark app as a package
