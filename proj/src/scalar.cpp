#include "acx/scalar.hpp"

#include <cctype>
#include <stdexcept>

namespace acx {

Scalar& Scalar::operator+=(const Scalar& o)
{
    re_ += o.re_;
    im_ += o.im_;
    return *this;
}

Scalar& Scalar::operator-=(const Scalar& o)
{
    re_ -= o.re_;
    im_ -= o.im_;
    return *this;
}

Scalar& Scalar::operator*=(const Scalar& o)
{
    if (o.is_real()) {
        re_ *= o.re_;
        im_ *= o.re_;
        return *this;
    }
    Rational r = re_ * o.re_ - im_ * o.im_;
    Rational m = re_ * o.im_ + im_ * o.re_;
    re_ = r;
    im_ = m;
    return *this;
}

Scalar Scalar::inverse() const
{
    if (is_zero())
        throw std::domain_error("division by zero scalar");
    Rational n = norm2();
    return Scalar(re_ / n, -im_ / n);
}

Scalar& Scalar::operator/=(const Scalar& o)
{
    if (o.is_real()) {
        if (sgn(o.re_) == 0)
            throw std::domain_error("division by zero scalar");
        re_ /= o.re_;
        im_ /= o.re_;
        return *this;
    }
    return *this *= o.inverse();
}

Rational parse_rational(const std::string& text)
{
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c)))
            t += c;
    if (t.empty())
        throw std::invalid_argument("empty rational");
    if (t[0] == '+')
        t = t.substr(1);
    for (size_t k = 0; k < t.size(); ++k) {
        char c = t[k];
        bool ok = std::isdigit(static_cast<unsigned char>(c)) || c == '/' || (c == '-' && k == 0);
        if (!ok)
            throw std::invalid_argument("bad rational '" + text + "'");
    }
    Rational r;
    if (r.set_str(t, 10) != 0)
        throw std::invalid_argument("bad rational '" + text + "'");
    if (sgn(r.get_den()) == 0)
        throw std::invalid_argument("zero denominator in '" + text + "'");
    r.canonicalize();
    return r;
}

// Accepts a real term, an imaginary term ending in "i" (optionally "*i"), or both joined by a sign.
Scalar Scalar::parse(const std::string& text)
{
    std::string t;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c)))
            t += c;
    if (t.empty())
        throw std::invalid_argument("empty scalar");

    auto imag_term = [&](std::string s) -> Rational {
        s.pop_back();
        if (!s.empty() && s.back() == '*')
            s.pop_back();
        if (s.empty() || s == "+")
            return 1;
        if (s == "-")
            return -1;
        return parse_rational(s);
    };

    if (t.back() != 'i')
        return Scalar(parse_rational(t));

    size_t split = std::string::npos;
    for (size_t k = t.size() - 1; k > 0; --k) {
        if ((t[k] == '+' || t[k] == '-') && t[k - 1] != '/') {
            split = k;
            break;
        }
    }
    if (split == std::string::npos)
        return Scalar(0, imag_term(t));
    return Scalar(parse_rational(t.substr(0, split)), imag_term(t.substr(split)));
}

std::string Scalar::str() const
{
    bool has_re = sgn(re_) != 0;
    bool has_im = sgn(im_) != 0;
    if (!has_im)
        return re_.get_str();
    std::string im;
    if (im_ == 1)
        im = "i";
    else if (im_ == -1)
        im = "-i";
    else
        im = im_.get_str() + "*i";
    if (!has_re)
        return im;
    if (im[0] != '-')
        im = "+" + im;
    return re_.get_str() + im;
}

std::ostream& operator<<(std::ostream& os, const Scalar& s)
{
    return os << s.str();
}

} // namespace acx
