//! Recursive descent parser for MiniQt.

use crate::loc::SourceLocation;

use super::ast::*;
use super::lexer::{Token, TokenKind};
use super::FrontendError;

pub struct Parser<'t> {
    tokens: &'t [Token],
    pos: usize,
    eof_loc: SourceLocation,
}

/// Parses a token stream into an untyped program.
pub fn parse(tokens: &[Token]) -> Result<Program, FrontendError> {
    Parser::new(tokens).program()
}

/// Parses a single expression; the whole token stream must be consumed.
pub fn parse_expr(tokens: &[Token]) -> Result<Expr, FrontendError> {
    let mut p = Parser::new(tokens);
    let e = p.expr()?;
    if !p.at_end() {
        return Err(p.unexpected("end of input"));
    }
    Ok(e)
}

type PResult<T> = Result<T, FrontendError>;

impl<'t> Parser<'t> {
    pub fn new(tokens: &'t [Token]) -> Self {
        let eof_loc = tokens
            .last()
            .map(|t| {
                let mut l = t.loc.clone();
                l.column += t.text.chars().count() as u32;
                l
            })
            .unwrap_or_else(|| SourceLocation::new("<input>", 1, 1));
        Parser {
            tokens,
            pos: 0,
            eof_loc,
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.tokens.len()
    }

    fn peek(&self) -> Option<&'t Token> {
        self.tokens.get(self.pos)
    }

    fn peek_at(&self, offset: usize) -> Option<&'t Token> {
        self.tokens.get(self.pos + offset)
    }

    fn check(&self, text: &str) -> bool {
        self.peek().is_some_and(|t| t.is(text))
    }

    fn check_at(&self, offset: usize, text: &str) -> bool {
        self.peek_at(offset).is_some_and(|t| t.is(text))
    }

    fn loc(&self) -> SourceLocation {
        self.peek()
            .map(|t| t.loc.clone())
            .unwrap_or_else(|| self.eof_loc.clone())
    }

    fn advance(&mut self) -> Option<&'t Token> {
        let t = self.tokens.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn unexpected(&self, expected: &str) -> FrontendError {
        FrontendError::Parse {
            loc: self.loc(),
            expected: expected.to_string(),
            found: self
                .peek()
                .map(|t| t.to_string())
                .unwrap_or_else(|| "end of input".to_string()),
        }
    }

    fn eat(&mut self, text: &str) -> bool {
        if self.check(text) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, text: &str) -> PResult<&'t Token> {
        if self.check(text) {
            Ok(self.advance().unwrap())
        } else {
            Err(self.unexpected(&format!("`{text}`")))
        }
    }

    fn ident(&mut self) -> PResult<(String, SourceLocation)> {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Identifier => {
                self.pos += 1;
                Ok((t.text.clone(), t.loc.clone()))
            }
            _ => Err(self.unexpected("identifier")),
        }
    }

    fn program(&mut self) -> PResult<Program> {
        let mut items = Vec::new();
        while !self.at_end() {
            if self.check("#") {
                items.push(Item::Include(self.include()?));
            } else if self.check("template") || self.check("class") {
                items.push(Item::Class(self.class_decl()?));
            } else {
                let ty = self.type_name()?;
                let (name, loc) = self.ident()?;
                items.push(Item::Function(self.func_rest(Some(ty), name, loc)?));
            }
        }
        Ok(Program { items })
    }

    fn include(&mut self) -> PResult<Include> {
        let loc = self.expect("#")?.loc.clone();
        match self.peek() {
            Some(t) if t.kind == TokenKind::Identifier && t.text == "include" => {
                self.pos += 1;
            }
            _ => return Err(self.unexpected("`include`")),
        }
        self.expect("<")?;
        let (name, _) = self.ident()?;
        self.expect(">")?;
        Ok(Include { name, loc })
    }

    fn class_decl(&mut self) -> PResult<ClassDecl> {
        let loc = self.loc();
        let type_param = if self.eat("template") {
            self.expect("<")?;
            self.expect("class")?;
            let (tp, _) = self.ident()?;
            self.expect(">")?;
            Some(tp)
        } else {
            None
        };
        self.expect("class")?;
        let (name, _) = self.ident()?;
        self.expect("{")?;
        let mut fields = Vec::new();
        let mut methods = Vec::new();
        while !self.check("}") {
            if self.at_end() {
                return Err(self.unexpected("`}`"));
            }
            // Access labels carry no meaning here.
            if let Some(t) = self.peek() {
                if t.kind == TokenKind::Identifier
                    && matches!(t.text.as_str(), "public" | "private" | "protected")
                    && self.check_at(1, ":")
                {
                    self.pos += 2;
                    continue;
                }
                if t.kind == TokenKind::Identifier && t.text == name && self.check_at(1, "(") {
                    let (ctor, cloc) = self.ident()?;
                    methods.push(self.func_rest(None, ctor, cloc)?);
                    continue;
                }
            }
            let ty = self.type_name()?;
            let (member, mloc) = self.ident()?;
            if self.check("(") {
                methods.push(self.func_rest(Some(ty), member, mloc)?);
            } else {
                let array = if self.eat("[") {
                    let size = match self.peek() {
                        Some(t) if t.kind == TokenKind::IntLiteral => {
                            ArraySize::Literal(self.int_value(t)?)
                        }
                        Some(t) if t.kind == TokenKind::Identifier => {
                            ArraySize::Named(t.text.clone())
                        }
                        _ => return Err(self.unexpected("array size")),
                    };
                    self.pos += 1;
                    self.expect("]")?;
                    Some(size)
                } else {
                    None
                };
                self.expect(";")?;
                fields.push(FieldDecl {
                    ty,
                    name: member,
                    array,
                    loc: mloc,
                });
            }
        }
        self.expect("}")?;
        self.eat(";");
        Ok(ClassDecl {
            name,
            type_param,
            fields,
            methods,
            origin: Origin::User,
            loc,
        })
    }

    fn int_value(&self, t: &Token) -> PResult<u64> {
        t.text.parse::<u64>().map_err(|_| FrontendError::Parse {
            loc: t.loc.clone(),
            expected: "integer literal that fits in 64 bits".into(),
            found: t.text.clone(),
        })
    }

    fn func_rest(
        &mut self,
        ret: Option<TypeName>,
        name: String,
        loc: SourceLocation,
    ) -> PResult<FuncDecl> {
        self.expect("(")?;
        let mut params = Vec::new();
        if !self.check(")") {
            loop {
                let ploc = self.loc();
                let ty = self.type_name()?;
                let (pname, _) = self.ident()?;
                params.push(Param {
                    ty,
                    name: pname,
                    loc: ploc,
                });
                if !self.eat(",") {
                    break;
                }
            }
        }
        self.expect(")")?;
        let body = self.block()?;
        Ok(FuncDecl {
            ret,
            name,
            params,
            body,
            origin: Origin::User,
            loc,
        })
    }

    fn type_name(&mut self) -> PResult<TypeName> {
        let loc = self.loc();
        let name = match self.peek() {
            Some(t)
                if t.kind == TokenKind::Keyword
                    && matches!(t.text.as_str(), "int" | "bool" | "void" | "string") =>
            {
                self.pos += 1;
                t.text.clone()
            }
            Some(t) if t.kind == TokenKind::Identifier => {
                self.pos += 1;
                t.text.clone()
            }
            _ => return Err(self.unexpected("type")),
        };
        let arg = if self.check("<") {
            self.pos += 1;
            let a = self.type_name()?;
            self.expect(">")?;
            Some(Box::new(a))
        } else {
            None
        };
        Ok(TypeName { name, arg, loc })
    }

    fn block(&mut self) -> PResult<Block> {
        self.expect("{")?;
        let mut stmts = Vec::new();
        while !self.check("}") {
            if self.at_end() {
                return Err(self.unexpected("`}`"));
            }
            stmts.push(self.stmt()?);
        }
        self.expect("}")?;
        Ok(Block { stmts })
    }

    /// A braced block, or a single statement wrapped into one.
    fn body(&mut self) -> PResult<Block> {
        if self.check("{") {
            self.block()
        } else {
            Ok(Block {
                stmts: vec![self.stmt()?],
            })
        }
    }

    /// Whether a declaration starts at the cursor. Only a type followed by
    /// an identifier counts.
    fn looks_like_decl(&mut self) -> bool {
        match self.peek() {
            Some(t) if t.kind == TokenKind::Keyword => {
                matches!(t.text.as_str(), "int" | "bool" | "void" | "string")
            }
            Some(t) if t.kind == TokenKind::Identifier => {
                let save = self.pos;
                let ok = self.type_name().is_ok()
                    && self.peek().is_some_and(|t| t.kind == TokenKind::Identifier);
                self.pos = save;
                ok
            }
            _ => false,
        }
    }

    fn stmt(&mut self) -> PResult<Stmt> {
        let loc = self.loc();
        if self.check("{") {
            return Ok(Stmt::Block(self.block()?));
        }
        if self.eat("if") {
            self.expect("(")?;
            let cond = self.expr()?;
            self.expect(")")?;
            let then_block = self.body()?;
            let else_block = if self.eat("else") {
                Some(self.body()?)
            } else {
                None
            };
            return Ok(Stmt::If {
                cond,
                then_block,
                else_block,
                loc,
            });
        }
        if self.eat("while") {
            self.expect("(")?;
            let cond = self.expr()?;
            self.expect(")")?;
            let body = self.body()?;
            return Ok(Stmt::While { cond, body, loc });
        }
        if self.eat("for") {
            self.expect("(")?;
            let init = if self.check(";") {
                None
            } else {
                Some(Box::new(self.simple_stmt()?))
            };
            self.expect(";")?;
            let cond = if self.check(";") {
                None
            } else {
                Some(self.expr()?)
            };
            self.expect(";")?;
            let step = if self.check(")") {
                None
            } else {
                Some(Box::new(self.simple_stmt()?))
            };
            self.expect(")")?;
            let body = self.body()?;
            return Ok(Stmt::For {
                init,
                cond,
                step,
                body,
                loc,
            });
        }
        if self.eat("return") {
            let value = if self.check(";") {
                None
            } else {
                Some(self.expr()?)
            };
            self.expect(";")?;
            return Ok(Stmt::Return { value, loc });
        }
        if self.eat("assert") {
            self.expect("(")?;
            let cond = self.expr()?;
            self.expect(")")?;
            self.expect(";")?;
            return Ok(Stmt::Assert { cond, loc });
        }
        let s = self.simple_stmt()?;
        self.expect(";")?;
        Ok(s)
    }

    /// Declarations, assignments, increments and expression statements,
    /// without the trailing semicolon.
    fn simple_stmt(&mut self) -> PResult<Stmt> {
        let loc = self.loc();
        if self.looks_like_decl() {
            let ty = self.type_name()?;
            let (name, _) = self.ident()?;
            let ctor_args = if self.check("(") {
                Some(self.args()?)
            } else {
                None
            };
            let init = if self.eat("=") {
                Some(self.expr()?)
            } else {
                None
            };
            return Ok(Stmt::VarDecl {
                ty,
                name,
                ctor_args,
                init,
                loc,
            });
        }
        let target = self.expr()?;
        let op = if self.eat("=") {
            Some(AssignOp::Set)
        } else if self.eat("+=") {
            Some(AssignOp::Add)
        } else if self.eat("-=") {
            Some(AssignOp::Sub)
        } else {
            None
        };
        if let Some(op) = op {
            let value = self.expr()?;
            return Ok(Stmt::Assign {
                target,
                op,
                value,
                loc,
            });
        }
        if self.eat("++") {
            return Ok(Stmt::Step {
                target,
                increment: true,
                loc,
            });
        }
        if self.eat("--") {
            return Ok(Stmt::Step {
                target,
                increment: false,
                loc,
            });
        }
        Ok(Stmt::Expr { expr: target, loc })
    }

    fn args(&mut self) -> PResult<Vec<Expr>> {
        self.expect("(")?;
        let mut args = Vec::new();
        if !self.check(")") {
            loop {
                args.push(self.expr()?);
                if !self.eat(",") {
                    break;
                }
            }
        }
        self.expect(")")?;
        Ok(args)
    }

    pub fn expr(&mut self) -> PResult<Expr> {
        self.binary(1)
    }

    fn binary_op(&self) -> Option<BinaryOp> {
        let t = self.peek()?;
        if t.kind != TokenKind::Operator {
            return None;
        }
        Some(match t.text.as_str() {
            "*" => BinaryOp::Mul,
            "/" => BinaryOp::Div,
            "%" => BinaryOp::Rem,
            "+" => BinaryOp::Add,
            "-" => BinaryOp::Sub,
            "<" => BinaryOp::Lt,
            "<=" => BinaryOp::Le,
            ">" => BinaryOp::Gt,
            ">=" => BinaryOp::Ge,
            "==" => BinaryOp::Eq,
            "!=" => BinaryOp::Ne,
            "&&" => BinaryOp::And,
            "||" => BinaryOp::Or,
            _ => return None,
        })
    }

    /// Precedence climbing; all binary operators are left-associative.
    fn binary(&mut self, min_prec: u8) -> PResult<Expr> {
        let mut lhs = self.unary()?;
        while let Some(op) = self.binary_op() {
            let prec = op.precedence();
            if prec < min_prec {
                break;
            }
            let loc = self.loc();
            self.pos += 1;
            let rhs = self.binary(prec + 1)?;
            lhs = Expr::new(ExprKind::Binary(op, Box::new(lhs), Box::new(rhs)), loc);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> PResult<Expr> {
        let loc = self.loc();
        if self.eat("!") {
            let e = self.unary()?;
            return Ok(Expr::new(ExprKind::Unary(UnaryOp::Not, Box::new(e)), loc));
        }
        if self.eat("-") {
            let e = self.unary()?;
            return Ok(Expr::new(ExprKind::Unary(UnaryOp::Neg, Box::new(e)), loc));
        }
        self.postfix()
    }

    fn postfix(&mut self) -> PResult<Expr> {
        let mut e = self.primary()?;
        loop {
            let loc = self.loc();
            if self.check(".") || self.check("->") {
                let arrow = self.check("->");
                self.pos += 1;
                let (name, _) = self.ident()?;
                if self.check("(") {
                    let args = self.args()?;
                    e = Expr::new(
                        ExprKind::MethodCall {
                            receiver: Box::new(e),
                            method: name,
                            args,
                            arrow,
                        },
                        loc,
                    );
                } else {
                    e = Expr::new(
                        ExprKind::Member {
                            object: Box::new(e),
                            name,
                            arrow,
                        },
                        loc,
                    );
                }
            } else if self.eat("[") {
                let index = self.expr()?;
                self.expect("]")?;
                e = Expr::new(
                    ExprKind::Index {
                        base: Box::new(e),
                        index: Box::new(index),
                    },
                    loc,
                );
            } else {
                return Ok(e);
            }
        }
    }

    fn primary(&mut self) -> PResult<Expr> {
        let loc = self.loc();
        let Some(t) = self.peek() else {
            return Err(self.unexpected("expression"));
        };
        let kind = match t.kind {
            TokenKind::IntLiteral => {
                let v = self.int_value(t)?;
                self.pos += 1;
                ExprKind::Int(v)
            }
            TokenKind::StringLiteral => {
                self.pos += 1;
                ExprKind::Str(t.string_value().to_string())
            }
            TokenKind::Identifier => {
                self.pos += 1;
                if self.check("(") {
                    let args = self.args()?;
                    ExprKind::Call {
                        callee: t.text.clone(),
                        args,
                    }
                } else {
                    ExprKind::Ident(t.text.clone())
                }
            }
            TokenKind::Keyword if t.text == "true" || t.text == "false" => {
                self.pos += 1;
                ExprKind::Bool(t.text == "true")
            }
            TokenKind::Keyword if t.text == "this" => {
                self.pos += 1;
                ExprKind::This
            }
            _ if t.is("(") => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(")")?;
                return Ok(e);
            }
            _ => return Err(self.unexpected("expression")),
        };
        Ok(Expr::new(kind, loc))
    }
}

#[cfg(test)]
mod tests {
    use super::super::lexer::tokenize;
    use super::*;

    fn stmts(src: &str) -> Vec<Stmt> {
        let toks = tokenize(&format!("void f() {{ {src} }}"), "t.cpp").unwrap();
        let p = parse(&toks).unwrap();
        match p.items.into_iter().next().unwrap() {
            Item::Function(f) => f.body.stmts,
            _ => unreachable!(),
        }
    }

    #[test]
    fn assert_with_method_call() {
        let s = stmts("assert(mylist.front() == 300);");
        let Stmt::Assert { cond, .. } = &s[0] else {
            panic!("{s:?}")
        };
        let ExprKind::Binary(BinaryOp::Eq, lhs, rhs) = &cond.kind else {
            panic!()
        };
        assert!(matches!(
            &lhs.kind,
            ExprKind::MethodCall { method, args, .. } if method == "front" && args.is_empty()
        ));
        assert_eq!(rhs.kind, ExprKind::Int(300));
    }

    #[test]
    fn minimal_while() {
        let s = stmts("while (1) {}");
        assert!(matches!(
            &s[0],
            Stmt::While { cond, body, .. } if cond.kind == ExprKind::Int(1) && body.stmts.is_empty()
        ));
    }

    #[test]
    fn truncated_condition() {
        let toks = tokenize("if (x >", "t.cpp").unwrap();
        let mut p = Parser::new(&toks);
        let err = p.stmt().unwrap_err();
        match err {
            FrontendError::Parse {
                expected, found, ..
            } => {
                assert_eq!(expected, "expression");
                assert_eq!(found, "end of input");
            }
            e => panic!("{e:?}"),
        }
    }

    #[test]
    fn precedence() {
        let toks = tokenize("-a * b + c < d && !e || f", "t.cpp").unwrap();
        let e = parse_expr(&toks).unwrap();
        assert_eq!(
            super::super::pretty::print_expr(&e),
            "-a * b + c < d && !e || f"
        );
        let ExprKind::Binary(BinaryOp::Or, lhs, _) = &e.kind else {
            panic!()
        };
        let ExprKind::Binary(BinaryOp::And, cmp, _) = &lhs.kind else {
            panic!()
        };
        let ExprKind::Binary(BinaryOp::Lt, sum, _) = &cmp.kind else {
            panic!()
        };
        let ExprKind::Binary(BinaryOp::Add, prod, _) = &sum.kind else {
            panic!()
        };
        let ExprKind::Binary(BinaryOp::Mul, neg, _) = &prod.kind else {
            panic!()
        };
        assert!(matches!(neg.kind, ExprKind::Unary(UnaryOp::Neg, _)));
    }

    #[test]
    fn template_class_and_for_loop() {
        let src = r#"
            #include <QList>
            template<class T>
            class Box {
              public:
                T _items[__CONTAINER_CAPACITY];
                int _n;
                Box() { _n = 0; }
                void put(T x) {
                    for (int i = this->_n - 1; i > -1; i--)
                        this->_items[i+1] = this->_items[i];
                    this->_n++;
                }
            };
            int main() { Box<int> b; QFile f("data.txt"); b.put(3); return 0; }
        "#;
        let p = parse(&tokenize(src, "t.cpp").unwrap()).unwrap();
        assert_eq!(p.items.len(), 3);
        let Item::Class(c) = &p.items[1] else {
            panic!()
        };
        assert_eq!(c.type_param.as_deref(), Some("T"));
        assert_eq!(
            c.fields[0].array,
            Some(ArraySize::Named("__CONTAINER_CAPACITY".into()))
        );
        assert!(c.methods[0].ret.is_none());
        let Item::Function(main) = &p.items[2] else {
            panic!()
        };
        assert!(matches!(
            &main.body.stmts[1],
            Stmt::VarDecl { ctor_args: Some(a), .. } if a.len() == 1
        ));
    }
}
