namespace pellabel {}
