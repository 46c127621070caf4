# Types package